#include <cstdio>
#include <iostream>

#include <endogrow/cli.hpp>

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv + 1, argv + argc);
    std::string output_path;
    const auto result = endogrow::run_cli(args, &output_path);
    std::cerr << result.err;
    try {
        if (!output_path.empty() && result.exit_code != endogrow::kExitInputError) {
            endogrow::write_atomically(output_path, result.out);
        }
        else {
            // One write, so readers never see a partial table.
            std::fwrite(result.out.data(), 1, result.out.size(), stdout);
            std::fflush(stdout);
        }
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return endogrow::kExitInputError;
    }
    return result.exit_code;
}
