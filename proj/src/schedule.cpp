#include "kplab/schedule.hpp"

#include "kplab/errors.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <sstream>

namespace kplab {

namespace {

long binom(int n, int k) {
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Nonlinear-term brackets named explicitly in the case-by-case estimates.
const std::map<MultiIndex, std::vector<std::pair<MultiIndex, BracketKind>>>& a5_dependencies() {
    using K = BracketKind;
    static const std::map<MultiIndex, std::vector<std::pair<MultiIndex, BracketKind>>> table = {
        {{0, 3}, {{{1, 1}, K::double_prime}}},
        {{2, 1}, {{{1, 1}, K::prime}, {{0, 2}, K::prime}}},
        {{1, 2}, {{{0, 2}, K::prime}, {{1, 1}, K::double_prime}}},
        {{4, 0}, {{{3, 0}, K::prime}, {{2, 0}, K::prime}}},
        {{3, 1}, {{{2, 1}, K::prime}, {{1, 1}, K::prime}, {{2, 0}, K::prime}}},
        {{2, 2}, {{{1, 2}, K::prime}, {{1, 1}, K::prime}, {{0, 2}, K::prime}, {{2, 0}, K::prime}}},
        {{1, 3}, {{{0, 3}, K::prime}, {{0, 2}, K::prime}, {{1, 1}, K::prime}}},
    };
    return table;
}

bool is_primer(MultiIndex a) { return a.a1 >= 0 && a.order() == 2; }

std::string name(MultiIndex a) { return "[" + std::to_string(a.a1) + "," + std::to_string(a.a2) + "]"; }

std::string name(const Dependency& d) {
    return name(d.source) + (d.kind == BracketKind::prime ? "'" : "''");
}

} // namespace

void assign_dependencies(std::vector<CaseGroup>& groups) {
    std::map<MultiIndex, std::size_t> position;
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (const auto& m : groups[g].members) position[m] = g;
    auto earlier = [&](MultiIndex src, std::size_t g) {
        auto it = position.find(src);
        return it != position.end() && it->second < g;
    };
    for (std::size_t g = 0; g < groups.size(); ++g) {
        auto& group = groups[g];
        group.dependencies.clear();
        for (const auto& a : group.members) {
            if (is_primer(a)) continue;
            // [a1-1, a2]' and [a1+1, a2-1]'' both integrate (d^a u)^2 chi'.
            const MultiIndex uno{a.a1 - 1, a.a2}, dos{a.a1 + 1, a.a2 - 1};
            if (uno.a1 >= -1 && earlier(uno, g))
                group.dependencies.push_back({a, uno, BracketKind::prime, "A1/A2"});
            else if (dos.a2 >= 0 && earlier(dos, g))
                group.dependencies.push_back({a, dos, BracketKind::double_prime, "A1/A2"});
            else
                group.dependencies.push_back({a, uno.a1 >= -1 ? uno : dos, uno.a1 >= -1 ? BracketKind::prime : BracketKind::double_prime, "A1/A2"});
            const auto it = a5_dependencies().find(a);
            if (it != a5_dependencies().end())
                for (const auto& [src, kind] : it->second) group.dependencies.push_back({a, src, kind, "A5"});
        }
    }
}

std::vector<CaseGroup> case_schedule(int n, ScheduleOptions opts) {
    if (n < 3) throw InvalidOrder("case schedule needs n >= 3");
    std::vector<CaseGroup> g;
    auto single = [&](int order, MultiIndex a) { g.push_back({order, {a}, false, {}}); };
    single(2, {2, 0});
    single(2, {1, 1});
    single(2, {0, 2});
    single(2, {-1, 3});
    single(3, {3, 0});
    g.push_back({3, {{2, 1}, {1, 2}, {0, 3}}, true, {}});
    if (n >= 4) {
        if (opts.joint_order4) {
            g.push_back({4, {{4, 0}, {3, 1}, {2, 2}, {1, 3}}, true, {}});
        } else {
            single(4, {4, 0});
            g.push_back({4, {{3, 1}, {2, 2}, {1, 3}}, true, {}});
        }
        single(4, {0, 4});
    }
    for (int m = 5; m <= n; ++m) {
        CaseGroup joint{m, {}, true, {}};
        for (int a1 = m; a1 >= 1; --a1) joint.members.push_back({a1, m - a1});
        g.push_back(joint);
        single(m, {0, m});
    }
    assign_dependencies(g);
    return g;
}

std::vector<LeibnizTerm> leibniz_terms(MultiIndex a) {
    if (a.a1 < 0 || a.a2 < 0) throw NegativeXOrder("Leibniz expansion needs a1, a2 >= 0");
    std::vector<LeibnizTerm> t;
    for (int b1 = 0; b1 <= a.a1; ++b1)
        for (int b2 = 0; b2 <= a.a2; ++b2)
            t.push_back({binom(a.a1, b1) * binom(a.a2, b2), {b1, b2}, {a.a1 - b1, a.a2 - b2}});
    return t;
}

std::vector<LeibnizTerm> grouped_leibniz_terms(MultiIndex a) {
    std::vector<LeibnizTerm> out;
    std::map<std::pair<MultiIndex, MultiIndex>, std::size_t> slot;
    for (const auto& term : leibniz_terms(a)) {
        const MultiIndex other = term.gamma + MultiIndex{1, 0};
        const auto key = term.beta < other ? std::pair{term.beta, other} : std::pair{other, term.beta};
        auto it = slot.find(key);
        if (it == slot.end()) {
            slot[key] = out.size();
            out.push_back(term);
            continue;
        }
        auto& rep = out[it->second];
        rep.coef += term.coef;
        if (term.beta.order() < rep.beta.order()) {
            rep.beta = term.beta;
            rep.gamma = term.gamma;
        }
    }
    return out;
}

ClosureReport dependency_closure(const std::vector<CaseGroup>& groups) {
    std::map<MultiIndex, std::size_t> position;
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (const auto& m : groups[g].members) position[m] = g;
    ClosureReport r;
    r.groups = groups.size();
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (const auto& d : groups[g].dependencies) {
            auto it = position.find(d.source);
            if (it == position.end() || it->second >= g)
                throw BrokenChain("case " + d.consumer.str() + " needs " + name(d) + " from an earlier case");
            r.edges.push_back(d);
        }
    int top = 0;
    for (const auto& g : groups) top = std::max(top, g.order);
    r.n = top;
    r.closed = true;
    return r;
}

ClosureReport dependency_closure(int n, ScheduleOptions opts) {
    ClosureReport r = dependency_closure(case_schedule(n, opts));
    r.n = n;
    return r;
}

std::string schedule_json(const std::vector<CaseGroup>& groups) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& g : groups) {
        nlohmann::json members = nlohmann::json::array(), deps = nlohmann::json::array();
        for (const auto& m : g.members) members.push_back({m.a1, m.a2});
        for (const auto& d : g.dependencies)
            deps.push_back({{"case", {d.consumer.a1, d.consumer.a2}},
                            {"source", {d.source.a1, d.source.a2}},
                            {"kind", to_string(d.kind)},
                            {"term", d.term}});
        j.push_back({{"order", g.order}, {"members", members}, {"gronwall_joint", g.gronwall_joint}, {"dependencies", deps}});
    }
    return j.dump(2);
}

std::string schedule_dot(const std::vector<CaseGroup>& groups) {
    std::ostringstream o;
    o << "digraph schedule {\n  rankdir=LR;\n  node [shape=box];\n";
    for (std::size_t g = 0; g < groups.size(); ++g) {
        o << "  subgraph cluster_" << g << " {\n    label=\"group " << g << (groups[g].gronwall_joint ? " (joint)" : "")
          << "\";\n";
        for (const auto& m : groups[g].members) o << "    \"" << name(m) << "\";\n";
        o << "  }\n";
    }
    for (const auto& g : groups)
        for (const auto& d : g.dependencies)
            o << "  \"" << name(d.source) << "\" -> \"" << name(d.consumer) << "\" [label=\"" << name(d) << " " << d.term
              << "\"];\n";
    o << "}\n";
    return o.str();
}

} // namespace kplab
