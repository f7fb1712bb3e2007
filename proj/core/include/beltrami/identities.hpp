#pragma once

// Identity table around the Hopf field: closed-form constants and coefficient
// identities checked against direct exact-moment integration on random draws.

#include <cstdint>
#include <string>
#include <vector>

namespace beltrami {

struct IdentityRow {
  std::string id;
  std::string anchor;          // short description of where the identity comes from
  std::string expected_exact;  // "p/q * pi^k" when the target is a closed constant, else the formula
  double expected = 0.0;       // value of the right-hand side at the worst draw
  double computed = 0.0;       // value of the left-hand side at the worst draw
  double abs_error = 0.0;
  double rel_error = 0.0;
  int draws = 1;
  bool pass = false;
};

struct IdentityOptions {
  std::uint64_t seed = 20240611;
  int draws = 20;
  int inequality_draws = 100;
  double tol = 1e-10;
};

// Every row of the table.
std::vector<IdentityRow> verify_identities(const IdentityOptions& options = {});

// Individual groups, exposed for tests and the CLI.
std::vector<IdentityRow> z2_moment_identities(const IdentityOptions& options);
std::vector<IdentityRow> coefficient_identities(const IdentityOptions& options);
IdentityRow anti_hopf_square_identity(const IdentityOptions& options);
IdentityRow sharp_hopf_component_constant(const IdentityOptions& options);
IdentityRow correction_norm_identity(const IdentityOptions& options);
IdentityRow lower_bound_inequality(const IdentityOptions& options);

// Largest eigenvalue of c -> |B1.W|^2 over unit W in the eigenvalue-5 space.
double sharp_hopf_component_value();

}  // namespace beltrami
