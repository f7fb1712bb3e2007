#pragma once

// Curl eigenspaces of S^3: explicit bases, an exact solver, projections and helicity.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "beltrami/frame_field.hpp"
#include "beltrami/integer_matrix.hpp"

namespace beltrami {

enum class Provenance { explicit_paper, reflected, solver };
std::string to_string(Provenance p);

struct AtlasEntry {
  int eigenvalue = 0;
  // Unnormalized fields with rational coefficients, pairwise L2-orthogonal.
  std::vector<FrameField> fields;
  std::vector<ExactScalar> squared_norms;
  Provenance label = Provenance::solver;
  std::vector<std::string> names;
  // Tabulated normalizer squares c_i^2 (c_i e_i has unit norm); empty for solver entries.
  std::vector<ExactScalar> normalizer_squares;

  std::size_t dimension() const { return fields.size(); }
  // Orthonormal floating copy of field i.
  RealFrameField unit_field(std::size_t i) const;
};

struct UnsupportedEigenvalue : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegreeOverflow : std::out_of_range {
  using std::out_of_range::out_of_range;
};
struct SpectrumMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct HelicityUndefined : std::domain_error {
  using std::domain_error::domain_error;
};

// Eigenvalues with explicit bases: +-2, +-3, +-4, +-5.
AtlasEntry explicit_basis(int eigenvalue);
// Same, looked up by name ("u5", "v12", "w17", "B1", "Bhat3", and "T*" prefixed reflections).
const FrameField& explicit_field(const std::string& name);

// ---------------------------------------------------------------- exact solver

// Curl restricted to triples of homogeneous degree-k coefficient polynomials.
// Vector layout: index = component * monomials.size() + position of the monomial.
struct CurlBlock {
  int degree = 0;
  std::vector<monomial::Key> monomials;
  std::map<monomial::Key, int> index;
  SparseIntMatrix curl;
  std::vector<int> eigenvalues;
  // Projection onto eigenvalues[i] is numerators[i] / denominators[i] (dense, column-major).
  std::vector<std::vector<std::int64_t>> numerators;
  std::vector<std::int64_t> denominators;
  std::vector<int> dimensions;

  int size() const { return 3 * static_cast<int>(monomials.size()); }
  int slot(int eigenvalue) const;  // -1 when absent
};

// Candidate spectrum of the degree-k block.
std::vector<int> block_spectrum_candidates(int k);
// Built on first use and cached; throws SpectrumMismatch if the projections fail to
// resolve the identity or an image is not an eigenvector.
const CurlBlock& curl_block(int k);

constexpr int kDefaultDmaxLimit = 5;
// Highest coefficient degree accepted by the projections.
int projection_degree_limit();
void set_dmax_limit(int dmax);

struct SolverResult {
  int dmax = 0;
  std::vector<int> blocks;
  std::vector<AtlasEntry> entries;  // sorted by eigenvalue
  int gradient_dimension = 0;
  bool identity_resolved = false;
};
// Eigenvalues +-(k+2), k <= dmax, with exact bases.
SolverResult eigenspace_solve(int dmax);

// Explicit basis when one exists, otherwise the solver basis of the eigenspace (cached).
const AtlasEntry& atlas_entry(int eigenvalue);

// ---------------------------------------------------------------- projections

FrameField project_eigen(const FrameField& F, int eigenvalue);
RealFrameField project_eigen(const RealFrameField& F, int eigenvalue);

struct EigenDecomposition {
  std::map<int, FrameField> components;  // eigenvalue 0 holds the gradient part
  FrameField residual;
};
struct RealEigenDecomposition {
  std::map<int, RealFrameField> components;
  RealFrameField residual;
};
EigenDecomposition decompose(const FrameField& F);
RealEigenDecomposition decompose(const RealFrameField& F);

ExactScalar helicity(const FrameField& F);
// Throws HelicityUndefined when the gradient part exceeds tol relative to the field.
double helicity(const RealFrameField& F, double tol = 1e-10);
FrameField curl_inverse(const FrameField& F);
RealFrameField curl_inverse(const RealFrameField& F, double tol = 1e-10);

struct RayleighValue {
  bool exact = false;
  ExactScalar exact_value;
  double value = 0.0;
};
RayleighValue rayleigh_quotient(const FrameField& F);
double rayleigh_quotient(const RealFrameField& F);

// JSON dump of entries: eigenvalue, label, names, integer-coefficient fields, squared norms.
std::string export_atlas_json(const std::vector<AtlasEntry>& entries);

}  // namespace beltrami
