#pragma once

// One entry point for word length in every mode. Closed forms are used for
// Exact and Quasi; BfsOracle enumerates the ball once and answers lookups.

#include <memory>

#include "oracle.hpp"

namespace endogrow {

class LengthFunction {
public:
    explicit LengthFunction(Group G, std::size_t budget = default_ball_budget()) : group_(std::move(G))
    {
        if (group_.length_mode() == LengthMode::BfsOracle) {
            census_ = std::make_shared<const BallCensus>(enumerate_ball(group_, group_.bfs_radius(), budget));
        }
    }

    const Group& group() const { return group_; }
    const BallCensus* census() const { return census_.get(); }

    /// Throws OutOfRange in BfsOracle mode beyond the enumerated radius.
    LengthValue operator()(const Element& g) const
    {
        if (census_) {
            return exact_length(*census_, g);
        }
        return closed_form_length(g, group_);
    }

private:
    Group group_;
    std::shared_ptr<const BallCensus> census_;
};

/// Convenience for single queries; in BfsOracle mode this enumerates a ball
/// per call, so reuse a LengthFunction for repeated lookups.
inline LengthValue word_length(const Element& g, const Group& G) { return LengthFunction(G)(g); }

} // namespace endogrow
