#pragma once

#include "tpta/encoder.hpp"
#include "tpta/ta.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tpta::explore {

struct SearchBudget {
    std::size_t max_internal_steps = 32;
    /// Empty means default_grid of the network.
    std::vector<Rational> delay_grid;
    std::size_t max_configs = 200000;
};

struct SearchOptions {
    /// Shuffles successor order when set.
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;
};

enum class SearchStatus { Found, NotFound, BudgetExhausted };

[[nodiscard]] std::string_view status_name(SearchStatus status);

struct SearchResult {
    SearchStatus status = SearchStatus::NotFound;
    std::optional<ta::Run> run;
    std::size_t explored = 0;
    /// Some branch was cut by max_internal_steps.
    bool depth_limited = false;
};

/// {0} plus every guard constant, epsilon and 1, plus their positive pairwise
/// differences; sorted and duplicate-free.
[[nodiscard]] std::vector<Rational> default_grid(const enc::EncodedNetwork& enc);

/// Breadth-first search over internal steps and positive grid delays until
/// L[0] = goal_M. A returned run always passes run_check.
[[nodiscard]] SearchResult bounded_reach(const enc::EncodedNetwork& enc, const SearchBudget& budget,
                                         const SearchOptions& options = {});

} // namespace tpta::explore
