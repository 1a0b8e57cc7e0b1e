// Growth rates of a few endomorphisms, exact where a closed form exists and
// estimated from K_m otherwise. Usage: growth_tour [spec.json ...]

#include <cstdio>

#include <endogrow/spec_io.hpp>

using namespace endogrow;

namespace {

void report(const Instance& inst)
{
    const auto& alpha = inst.alpha;
    const auto e = km_table(alpha, inst.options.max_m);
    std::printf("%-40s  K_%zu = %s  inf_bound %s  ratio_estimate %s", inst.name.c_str(), e.size(),
                e.size() ? e.K.back().str().c_str() : "-", format_real(e.inf_bound).c_str(),
                format_real(e.ratio_estimate).c_str());
    if (alpha.group().is_abelian() && alpha.as<MatrixEndo>() != nullptr) {
        std::printf("  exact %s", format_real(gr_exact_abelian(alpha)).c_str());
    }
    std::printf("\n");
}

} // namespace

int main(int argc, char** argv)
{
    try {
        if (argc > 1) {
            for (int i = 1; i < argc; ++i) {
                report(instance_from_text(read_text_file(argv[i]), argv[i]).instance);
            }
            return 0;
        }
        const Group Z2 = free_abelian(2);
        report({"[[0,2],[1,0]] on Z^2", matrix_endo(Z2, IntMatrix{{0, 2}, {1, 0}}), {}, 0, 2, {20, 12, 0}});
        report({"a -> ab, b -> a on F2", word_endo(free_group(2), std::vector<std::vector<int>>{{1, 2}, {1}}), {}, 0,
                2, {24, 12, 0}});
        report({"heisenberg, lambda = gamma = 2", heisenberg_endo(heisenberg(), 2, 2), {}, 0, 2, {16, 12, 0}});
        const auto n = gr_nilpotent(heisenberg_endo(heisenberg(), 2, 2));
        std::printf("  layer rates %s and %s: combined %s, without the 1/k exponents %s\n",
                    format_real(n.layers[0]).c_str(), format_real(n.layers[1]).c_str(),
                    format_real(n.combined).c_str(), format_real(n.without_exponents).c_str());
    }
    catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
