#pragma once

// Self-contained oracle property suite behind the `verify` subcommand:
// Kraus completeness, residue partitions, closed forms against the Fock
// oracle, USD POVM properties, the graph-pruning equivalence, and the
// cross-variant rate invariant.

#include <ostream>

namespace catrep::verify {

// Runs every check, printing one line per check; returns true when all
// pass.  Setting CATREP_PERTURB_SERIES=1 in the environment injects a
// 1e-6 relative perturbation into the closed-form series comparison and
// must make the suite fail.
bool run_suite(std::ostream &out);

} // namespace catrep::verify
