#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gobrowse/agent/policy.hpp"
#include "gobrowse/simenv/site_spec.hpp"

namespace gobrowse::agent {

// Spec-aware reference policies. They stand in for LLM agents in tests and
// deterministic runs: solvers route through the site by breadth-first search
// over link targets, proposers read the page declarations directly.

// Shortest click sequence from one page to another, empty when from == to,
// nullopt when no click path exists. Query strings are ignored for page
// identity.
std::optional<std::vector<simenv::Action>> find_click_path(const simenv::SiteSpec& spec,
                                                           const core::CanonicalUrl& from,
                                                           const core::CanonicalUrl& to);

// Action script solving `goal` from `start`. Ground-truth goals click through
// to their source page and replay the declared local path; navigation goals
// click the labeled element and confirm with a message; anything else (or an
// unroutable goal) reports infeasible.
std::vector<simenv::Action> oracle_script(const simenv::SiteSpec& spec, const std::string& goal,
                                          const core::CanonicalUrl& start);

// Solver/checker factory over oracle_script. failure_probability > 0 makes
// each step derail with that chance, seeded from the policy context.
PolicyFactory oracle_solver_factory(std::shared_ptr<const simenv::SiteSpec> spec,
                                    std::string name = "oracle", double failure_probability = 0.0);

// Proposes one navigation task per internal link or button label on the node
// page, then confirms.
PolicyFactory oracle_nav_proposer_factory(std::shared_ptr<const simenv::SiteSpec> spec);

// Proposes the ground-truth goals declared for the node page, then confirms.
PolicyFactory oracle_page_proposer_factory(std::shared_ptr<const simenv::SiteSpec> spec);

}  // namespace gobrowse::agent
