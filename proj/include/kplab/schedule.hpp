#pragma once

#include "kplab/diagnostics.hpp"
#include "kplab/spectral.hpp"

#include <string>
#include <vector>

namespace kplab {

/// A time-integrated bracket of an earlier case consumed by a later one.
struct Dependency {
    MultiIndex consumer;
    MultiIndex source;
    BracketKind kind = BracketKind::prime;
    std::string term;  ///< "A1/A2" (weight-derivative terms) or "A5" (nonlinear term)
};

struct CaseGroup {
    int order = 0;
    std::vector<MultiIndex> members;
    bool gronwall_joint = false;
    std::vector<Dependency> dependencies;
};

struct ScheduleOptions {
    bool joint_order4 = false;  ///< estimate (4,0) together with (3,1), (2,2), (1,3)
};

/// Ordered case groups for orders up to n (n >= 3), with dependencies filled in.
std::vector<CaseGroup> case_schedule(int n, ScheduleOptions opts = {});

struct LeibnizTerm {
    long coef = 0;
    MultiIndex beta;   ///< derivative on the first factor
    MultiIndex gamma;  ///< second factor is dx d^gamma u
};

/// Full bivariate expansion d^a(u ux) = sum coef d^b u dx d^g u with b + g = a.
std::vector<LeibnizTerm> leibniz_terms(MultiIndex alpha);
/// Expansion with equal unordered products {d^b u, d^(g+e1) u} merged; the
/// representative keeps the smaller |b|.
std::vector<LeibnizTerm> grouped_leibniz_terms(MultiIndex alpha);

struct ClosureReport {
    int n = 0;
    std::size_t groups = 0;
    std::vector<Dependency> edges;
    bool closed = false;
};

/// Checks that every dependency is supplied by a strictly earlier group; throws BrokenChain.
ClosureReport dependency_closure(int n, ScheduleOptions opts = {});
ClosureReport dependency_closure(const std::vector<CaseGroup>& groups);

/// Fills group dependencies from the member positions (used after editing a schedule).
void assign_dependencies(std::vector<CaseGroup>& groups);

std::string schedule_json(const std::vector<CaseGroup>& groups);
std::string schedule_dot(const std::vector<CaseGroup>& groups);

} // namespace kplab
