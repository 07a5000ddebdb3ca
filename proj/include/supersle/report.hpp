#pragma once

#include "supersle/superalg.hpp"

#include <string>
#include <vector>

namespace supersle {

/// Outcome of one named check.  `provenance` is a descriptive identifier of
/// the mathematical statement exercised, stable across runs for audit.
struct Report {
  std::string name;
  bool pass = false;
  std::string detail;
  std::string provenance;
};

/// Graded Jacobi identity over every mode triple with |index| <= range at
/// the given central charge; used by the algebra suite checks and the
/// check-algebra subcommand.
Report algebra_scan(Sector sector, int range, const Rational& c);

/// All check names known to the suite, in execution order.
std::vector<std::string> suite_check_names();

/// Runs one named check.  Throws std::invalid_argument on unknown names.
Report run_check(const std::string& name);

/// Runs every check whose name contains one of the filters (all checks when
/// the filter list is empty).  Unknown filter strings that match nothing
/// throw std::invalid_argument.
std::vector<Report> run_suite(const std::vector<std::string>& filters);

std::string reports_to_json(const std::vector<Report>& reports);

}  // namespace supersle
