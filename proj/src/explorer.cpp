#include "tpta/explorer.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace tpta::explore {

std::string_view status_name(SearchStatus status)
{
    switch (status) {
    case SearchStatus::Found: return "found";
    case SearchStatus::NotFound: return "not found";
    case SearchStatus::BudgetExhausted: return "budget exhausted";
    }
    return "?";
}

namespace {

std::set<Rational> guard_constants(const enc::EncodedNetwork& enc)
{
    std::set<Rational> out;
    for (const auto& a : enc.network.automata)
        for (const auto& t : a.transitions)
            for (const auto& g : t.guard) out.insert(g.bound);
    return out;
}

struct Node {
    ta::Configuration config;
    std::optional<std::size_t> parent;
    ta::StepLabel label;
    std::size_t internal = 0;
};

struct Successor {
    ta::StepLabel label;
    ta::Configuration config;
};

class Keyer {
public:
    explicit Keyer(const enc::EncodedNetwork& enc)
    {
        const auto consts = guard_constants(enc);
        cap_ = (consts.empty() ? Rational(0) : *consts.rbegin()) + 1;
    }

    // Clocks above the largest guard constant are indistinguishable to guards.
    [[nodiscard]] std::string key(const ta::Configuration& q) const
    {
        std::string k;
        for (auto l : q.locations) k += std::to_string(l) + ',';
        k += '|';
        for (auto v : q.vars) k += std::to_string(v) + ',';
        k += '|';
        for (const auto& c : q.clocks) k += (c < cap_ ? c : cap_).str() + ',';
        return k;
    }

private:
    Rational cap_;
};

std::vector<Successor> successors(const enc::EncodedNetwork& enc, const Node& node, const SearchBudget& budget,
                                  const std::vector<Rational>& grid)
{
    std::vector<Successor> out;
    const auto& net = enc.network;
    if (node.internal < budget.max_internal_steps) {
        for (std::size_t i = 0; i < net.automata.size(); ++i) {
            for (std::size_t k = 0; k < net.automata[i].transitions.size(); ++k) {
                auto next = ta::internal(net, node.config, i, k);
                if (next) out.push_back(Successor{ta::InternalStep{i, k}, std::move(next).config()});
            }
        }
    }
    for (const auto& d : grid) {
        if (d.sign() <= 0) continue;
        auto next = ta::delay(net, node.config, d);
        if (!next) break;
        out.push_back(Successor{ta::DelayStep{d}, std::move(next).config()});
    }
    return out;
}

ta::Run rebuild(const std::vector<Node>& nodes, std::size_t last)
{
    std::vector<std::size_t> chain;
    for (std::optional<std::size_t> at = last; at; at = nodes[*at].parent) chain.push_back(*at);
    std::reverse(chain.begin(), chain.end());
    ta::Run run{nodes[chain.front()].config, {}};
    for (std::size_t j = 1; j < chain.size(); ++j)
        run.steps.push_back(ta::RunStep{nodes[chain[j]].label, nodes[chain[j]].config});
    return run;
}

} // namespace

std::vector<Rational> default_grid(const enc::EncodedNetwork& enc)
{
    auto base = guard_constants(enc);
    base.insert(enc.options.epsilon);
    base.insert(Rational(1));
    std::set<Rational> out{Rational(0)};
    for (const auto& a : base) {
        out.insert(a);
        for (const auto& b : base)
            if (b < a) out.insert(a - b);
    }
    return {out.begin(), out.end()};
}

SearchResult bounded_reach(const enc::EncodedNetwork& enc, const SearchBudget& budget, const SearchOptions& options)
{
    auto grid = budget.delay_grid.empty() ? default_grid(enc) : budget.delay_grid;
    for (const auto& d : grid)
        if (d.sign() < 0) throw std::invalid_argument("delay grid value " + d.str() + " is negative");
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const Keyer keyer(enc);
    std::vector<Node> nodes;
    std::unordered_map<std::string, std::size_t> best;
    SearchResult result;

    auto finish = [&](std::size_t idx) {
        auto run = rebuild(nodes, idx);
        const auto check = ta::run_check(enc.network, run);
        if (!check || !enc.accepting(run.last()))
            throw std::logic_error("explorer produced a run that does not replay: " + check.diagnostic);
        result.status = SearchStatus::Found;
        result.run = std::move(run);
        result.explored = nodes.size();
        return result;
    };

    nodes.push_back(Node{enc.initial(), std::nullopt, ta::DelayStep{Rational(0)}, 0});
    best.emplace(keyer.key(nodes[0].config), 0);
    if (enc.accepting(nodes[0].config)) return finish(0);

    std::vector<std::size_t> frontier{0};
    const unsigned workers = std::max(1U, options.workers);
    while (!frontier.empty()) {
        std::vector<std::vector<Successor>> expanded(frontier.size());
        auto expand = [&](std::size_t from, std::size_t to) {
            for (std::size_t j = from; j < to; ++j) {
                expanded[j] = successors(enc, nodes[frontier[j]], budget, grid);
                if (options.seed) {
                    std::mt19937_64 rng(*options.seed ^ (0x9e3779b97f4a7c15ULL * (frontier[j] + 1)));
                    std::shuffle(expanded[j].begin(), expanded[j].end(), rng);
                }
            }
        };
        if (workers == 1 || frontier.size() < 2 * workers) {
            expand(0, frontier.size());
        } else {
            std::vector<std::thread> pool;
            const std::size_t chunk = (frontier.size() + workers - 1) / workers;
            for (std::size_t from = 0; from < frontier.size(); from += chunk)
                pool.emplace_back(expand, from, std::min(frontier.size(), from + chunk));
            for (auto& t : pool) t.join();
        }

        std::vector<std::size_t> next;
        for (std::size_t j = 0; j < frontier.size(); ++j) {
            const auto parent = frontier[j];
            if (nodes[parent].internal >= budget.max_internal_steps) result.depth_limited = true;
            for (auto& s : expanded[j]) {
                const std::size_t internal =
                    nodes[parent].internal + (std::holds_alternative<ta::InternalStep>(s.label) ? 1 : 0);
                auto key = keyer.key(s.config);
                if (auto it = best.find(key); it != best.end()) {
                    if (it->second <= internal) continue;
                    it->second = internal;
                } else {
                    best.emplace(std::move(key), internal);
                }
                nodes.push_back(Node{std::move(s.config), parent, s.label, internal});
                const auto idx = nodes.size() - 1;
                if (enc.accepting(nodes[idx].config)) return finish(idx);
                if (nodes.size() >= budget.max_configs) {
                    result.status = SearchStatus::BudgetExhausted;
                    result.explored = nodes.size();
                    return result;
                }
                next.push_back(idx);
            }
        }
        frontier = std::move(next);
    }
    result.status = SearchStatus::NotFound;
    result.explored = nodes.size();
    return result;
}

} // namespace tpta::explore
