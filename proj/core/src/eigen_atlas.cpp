#include "beltrami/eigen_atlas.hpp"

#include <algorithm>
#include <atomic>
#include <memory>
#include <cmath>
#include <mutex>
#include <numeric>

#include <nlohmann/json.hpp>

namespace beltrami {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::explicit_paper:
      return "explicit-paper";
    case Provenance::reflected:
      return "reflected";
    case Provenance::solver:
      return "solver";
  }
  return "?";
}

RealFrameField AtlasEntry::unit_field(std::size_t i) const {
  return to_real(fields.at(i), 1.0 / std::sqrt(squared_norms.at(i).to_double()));
}

int CurlBlock::slot(int eigenvalue) const {
  auto it = std::find(eigenvalues.begin(), eigenvalues.end(), eigenvalue);
  return it == eigenvalues.end() ? -1 : static_cast<int>(it - eigenvalues.begin());
}

std::vector<int> block_spectrum_candidates(int k) {
  std::vector<int> s;
  for (int j = k; j >= 0; j -= 2) {
    s.push_back(j + 2);
    if (j >= 2) s.push_back(-j);
  }
  if (k >= 1) s.push_back(0);
  std::sort(s.begin(), s.end());
  return s;
}

namespace {

std::atomic<int> g_dmax_limit{kDefaultDmaxLimit};

using PolyField = BasicFrameField<RationalPoly>;

}  // namespace

// Frame derivative on raw (unreduced) polynomials keeps homogeneity.
inline RationalPoly frame_derivative(const RationalPoly& s, int i) {
  return linear_field_derivative(s, hopf_generator(i));
}

int projection_degree_limit() { return g_dmax_limit.load() + 2; }
void set_dmax_limit(int dmax) {
  if (dmax < 0) throw std::invalid_argument("set_dmax_limit: negative limit");
  g_dmax_limit.store(dmax);
}

namespace {

CurlBlock build_block(int k) {
  CurlBlock b;
  b.degree = k;
  b.monomials = monomial::of_degree(k);
  const int n = static_cast<int>(b.monomials.size());
  for (int i = 0; i < n; ++i) b.index[b.monomials[static_cast<std::size_t>(i)]] = i;
  const int N = 3 * n;
  b.curl = SparseIntMatrix(N, N);
  for (int a = 0; a < 3; ++a)
    for (int m = 0; m < n; ++m) {
      PolyField F;
      F[a] = RationalPoly::term(monomial::unpack(b.monomials[static_cast<std::size_t>(m)]), Rational(1));
      const PolyField G = curl(F);
      for (int c = 0; c < 3; ++c)
        for (const auto& [key, coef] : G[c].terms()) {
          if (coef.get_den() != 1 || !coef.get_num().fits_slong_p())
            throw SpectrumMismatch("curl block: non-integer matrix entry");
          b.curl.add(c * n + b.index.at(key), a * n + m, coef.get_num().get_si());
        }
    }

  b.eigenvalues = block_spectrum_candidates(k);
  const std::size_t ne = b.eigenvalues.size();
  b.numerators.assign(ne, std::vector<std::int64_t>(static_cast<std::size_t>(N) * N, 0));
  b.denominators.assign(ne, 1);
  for (std::size_t s = 0; s < ne; ++s)
    for (std::size_t t = 0; t < ne; ++t)
      if (s != t) b.denominators[s] = checked_mul(b.denominators[s], b.eigenvalues[s] - b.eigenvalues[t]);

  std::int64_t lcm = 1;
  for (auto d : b.denominators) lcm = std::lcm(lcm, std::abs(d));

  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic)
  for (int col = 0; col < N; ++col) {
    if (failed.load()) continue;
    try {
      std::vector<__int128> resolved(static_cast<std::size_t>(N), 0);
      for (std::size_t s = 0; s < ne; ++s) {
        std::vector<std::int64_t> v(static_cast<std::size_t>(N), 0);
        v[static_cast<std::size_t>(col)] = 1;
        for (std::size_t t = 0; t < ne; ++t)
          if (t != s) v = b.curl.multiply_shifted(v, b.eigenvalues[t]);
        // The image must be an eigenvector.
        const auto r = b.curl.multiply_shifted(v, b.eigenvalues[s]);
        if (std::any_of(r.begin(), r.end(), [](std::int64_t x) { return x != 0; }))
          throw SpectrumMismatch("curl block " + std::to_string(k) + ": candidate spectrum is incomplete");
        const std::int64_t w = lcm / b.denominators[s];
        for (int i = 0; i < N; ++i) {
          resolved[static_cast<std::size_t>(i)] += static_cast<__int128>(v[static_cast<std::size_t>(i)]) * w;
          b.numerators[s][static_cast<std::size_t>(col) * N + i] = v[static_cast<std::size_t>(i)];
        }
      }
      for (int i = 0; i < N; ++i)
        if (resolved[static_cast<std::size_t>(i)] != (i == col ? lcm : 0))
          throw SpectrumMismatch("curl block " + std::to_string(k) + ": projections do not sum to the identity");
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failed.exchange(true)) failure = e.what();
    }
  }
  if (failed.load()) throw SpectrumMismatch(failure);

  for (std::size_t s = 0; s < ne; ++s) {
    std::int64_t tr = 0;
    for (int i = 0; i < N; ++i) tr = checked_add(tr, b.numerators[s][static_cast<std::size_t>(i) * N + i]);
    if (tr % b.denominators[s] != 0) throw SpectrumMismatch("curl block: non-integral projection trace");
    b.dimensions.push_back(static_cast<int>(tr / b.denominators[s]));
  }
  return b;
}

}  // namespace

const CurlBlock& curl_block(int k) {
  if (k < 0) throw std::invalid_argument("curl_block: negative degree");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<CurlBlock>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, std::make_unique<CurlBlock>(build_block(k))).first;
  return *it->second;
}

namespace {

// Entry (a,m),(b,m') of the exact L2 Gram matrix of the block basis, as the coefficient of pi^2.
class BlockGram {
 public:
  explicit BlockGram(const CurlBlock& b) : n_(static_cast<int>(b.monomials.size())) {
    moments_.resize(static_cast<std::size_t>(n_) * n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        moments_[static_cast<std::size_t>(i) * n_ + j] =
            sphere_moment(monomial::unpack(monomial::multiply(b.monomials[static_cast<std::size_t>(i)],
                                                              b.monomials[static_cast<std::size_t>(j)])));
  }
  std::vector<Rational> apply(const std::vector<Rational>& v) const {
    std::vector<Rational> out(v.size());
    for (int a = 0; a < 3; ++a)
      for (int i = 0; i < n_; ++i) {
        Rational s = 0;
        for (int j = 0; j < n_; ++j) {
          const auto& x = v[static_cast<std::size_t>(a * n_ + j)];
          if (sgn(x) != 0) s += moments_[static_cast<std::size_t>(i) * n_ + j] * x;
        }
        out[static_cast<std::size_t>(a * n_ + i)] = s;
      }
    return out;
  }

 private:
  int n_;
  std::vector<Rational> moments_;
};

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

// Rescale to a primitive integer vector with a positive leading entry.
void make_primitive(std::vector<Rational>& v) {
  mpz_class l = 1, g = 0;
  for (const auto& x : v)
    if (sgn(x) != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
  for (auto& x : v) {
    x *= l;
    if (sgn(x) != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num().get_mpz_t());
  }
  if (g == 0) return;
  auto lead = std::find_if(v.begin(), v.end(), [](const Rational& x) { return sgn(x) != 0; });
  if (sgn(*lead) < 0) g = -g;
  for (auto& x : v) x /= Rational(g);
}

FrameField field_from_vector(const CurlBlock& b, const std::vector<Rational>& v) {
  const int n = static_cast<int>(b.monomials.size());
  FrameField F;
  for (int a = 0; a < 3; ++a) {
    RationalPoly p;
    for (int m = 0; m < n; ++m)
      if (sgn(v[static_cast<std::size_t>(a * n + m)]) != 0)
        p.add_term(b.monomials[static_cast<std::size_t>(m)], v[static_cast<std::size_t>(a * n + m)]);
    F[a] = SphereScalar(p);
  }
  return F;
}

AtlasEntry solver_entry(int mu) {
  const int k0 = mu > 0 ? mu - 2 : -mu;
  const CurlBlock& b = curl_block(k0);
  const int s = b.slot(mu);
  if (s < 0) throw SpectrumMismatch("solver: eigenvalue missing from its minimal block");
  const int N = b.size();
  const auto cols = independent_columns(b.numerators[static_cast<std::size_t>(s)], N, N);
  if (static_cast<int>(cols.size()) != b.dimensions[static_cast<std::size_t>(s)])
    throw SpectrumMismatch("solver: rank of the projection differs from its trace");

  const BlockGram gram(b);
  std::vector<std::vector<Rational>> ortho, gram_ortho;
  std::vector<Rational> norms;
  AtlasEntry e;
  e.eigenvalue = mu;
  e.label = Provenance::solver;
  for (int c : cols) {
    std::vector<Rational> v(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i)
      v[static_cast<std::size_t>(i)] = b.numerators[static_cast<std::size_t>(s)][static_cast<std::size_t>(c) * N + i];
    std::vector<Rational> w = v;
    for (std::size_t j = 0; j < ortho.size(); ++j) {
      const Rational f = dot(v, gram_ortho[j]) / norms[j];
      if (sgn(f) == 0) continue;
      for (int i = 0; i < N; ++i) w[static_cast<std::size_t>(i)] -= f * ortho[j][static_cast<std::size_t>(i)];
    }
    make_primitive(w);
    auto gw = gram.apply(w);
    norms.push_back(dot(w, gw));
    e.fields.push_back(field_from_vector(b, w));
    e.squared_norms.push_back(ExactScalar(norms.back(), 2));
    e.names.push_back("s" + std::to_string(mu) + "_" + std::to_string(e.fields.size()));
    ortho.push_back(std::move(w));
    gram_ortho.push_back(std::move(gw));
  }
  return e;
}

}  // namespace

SolverResult eigenspace_solve(int dmax) {
  if (dmax < 0 || dmax > g_dmax_limit.load())
    throw std::out_of_range("eigenspace_solve: dmax outside [0, " + std::to_string(g_dmax_limit.load()) + "]");
  SolverResult r;
  r.dmax = dmax;
  r.blocks = {dmax + 1, dmax + 2};
  for (int k : r.blocks) {
    const CurlBlock& b = curl_block(k);  // throws unless the identity is resolved
    const int z = b.slot(0);
    if (z >= 0) r.gradient_dimension += b.dimensions[static_cast<std::size_t>(z)];
  }
  r.identity_resolved = true;
  for (int mu = -(dmax + 2); mu <= dmax + 2; ++mu)
    if (std::abs(mu) >= 2) r.entries.push_back(solver_entry(mu));
  return r;
}

const AtlasEntry& atlas_entry(int eigenvalue) {
  if (std::abs(eigenvalue) < 2) throw UnsupportedEigenvalue("atlas_entry: no eigenspace for " + std::to_string(eigenvalue));
  static std::mutex mutex;
  static std::map<int, AtlasEntry> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(eigenvalue);
  if (it == cache.end()) {
    const bool has_explicit = std::abs(eigenvalue) <= 5;
    it = cache.emplace(eigenvalue, has_explicit ? explicit_basis(eigenvalue) : solver_entry(eigenvalue)).first;
  }
  return it->second;
}

// ---------------------------------------------------------------- projections

namespace {

template <class C>
struct ParityPart {
  int degree = -1;
  std::array<Poly4<C>, 3> f;
};

template <class C>
std::array<ParityPart<C>, 2> split_parity(const BasicFrameField<SphereScalar>* exact, const RealFrameField* real) {
  std::array<ParityPart<C>, 2> parts;
  for (int a = 0; a < 3; ++a)
    for (int p = 0; p < 2; ++p) {
      if constexpr (std::is_same_v<C, Rational>) {
        parts[static_cast<std::size_t>(p)].f[static_cast<std::size_t>(a)] = (*exact)[a].poly().parity_part(p);
      } else {
        parts[static_cast<std::size_t>(p)].f[static_cast<std::size_t>(a)] = (*real)[a].parity_part(p);
      }
      parts[static_cast<std::size_t>(p)].degree =
          std::max(parts[static_cast<std::size_t>(p)].degree, parts[static_cast<std::size_t>(p)].f[static_cast<std::size_t>(a)].degree());
    }
  for (auto& part : parts)
    if (part.degree > projection_degree_limit())
      throw DegreeOverflow("projection: coefficient degree " + std::to_string(part.degree) + " exceeds the limit " +
                           std::to_string(projection_degree_limit()));
  return parts;
}

const RationalPoly& square_sum_power(int j) {
  thread_local std::map<int, RationalPoly> cache;
  auto it = cache.find(j);
  if (it == cache.end()) it = cache.emplace(j, homogenize(RationalPoly(Rational(1)), 2 * j)).first;
  return it->second;
}

template <class C>
std::vector<C> to_vector(const CurlBlock& b, const std::array<Poly4<C>, 3>& f) {
  const int n = static_cast<int>(b.monomials.size());
  std::vector<C> v(static_cast<std::size_t>(3 * n), C(0));
  for (int a = 0; a < 3; ++a)
    for (const auto& [key, c] : f[static_cast<std::size_t>(a)].terms()) {
      const int d = monomial::degree(key);
      for (const auto& [k2, c2] : square_sum_power((b.degree - d) / 2).terms()) {
        C coef;
        if constexpr (std::is_same_v<C, Rational>) {
          coef = c * c2;
        } else {
          coef = c * c2.get_d();
        }
        v[static_cast<std::size_t>(a * n + b.index.at(monomial::multiply(key, k2)))] += coef;
      }
    }
  return v;
}

FrameField exact_from_vector(const CurlBlock& b, const std::vector<Rational>& v) { return field_from_vector(b, v); }

RealFrameField real_from_vector(const CurlBlock& b, const std::vector<double>& v) {
  const int n = static_cast<int>(b.monomials.size());
  RealFrameField F;
  for (int a = 0; a < 3; ++a)
    for (int m = 0; m < n; ++m) {
      const double x = v[static_cast<std::size_t>(a * n + m)];
      if (x != 0.0) F[a].add_term(b.monomials[static_cast<std::size_t>(m)], x);
    }
  // Reduce to the normal form so results compare with the exact backend.
  RealFrameField out;
  for (int a = 0; a < 3; ++a) {
    for (const auto& [key, c] : F[a].terms()) {
      const int e4 = monomial::exponent(key, 3);
      if (e4 < 2) {
        out[a].add_term(key, c);
        continue;
      }
      const SphereScalar red(RationalPoly::term({0, 0, 0, e4}, Rational(1)));
      const monomial::Key rest = key - static_cast<monomial::Key>(e4);
      for (const auto& [kr, cr] : red.poly().terms()) out[a].add_term(monomial::multiply(rest, kr), c * cr.get_d());
    }
  }
  return out;
}

std::vector<Rational> apply_exact(const CurlBlock& b, int s, const std::vector<Rational>& x) {
  const int N = b.size();
  mpz_class l = 1;
  for (const auto& q : x)
    if (sgn(q) != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
  std::vector<mpz_class> X(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) X[static_cast<std::size_t>(i)] = Rational(x[static_cast<std::size_t>(i)] * l).get_num();
  std::vector<mpz_class> Y(static_cast<std::size_t>(N), 0);
  const auto& M = b.numerators[static_cast<std::size_t>(s)];
  for (int c = 0; c < N; ++c) {
    const auto& xc = X[static_cast<std::size_t>(c)];
    if (xc == 0) continue;
    for (int r = 0; r < N; ++r) {
      const std::int64_t m = M[static_cast<std::size_t>(c) * N + r];
      if (m != 0) Y[static_cast<std::size_t>(r)] += xc * static_cast<long>(m);
    }
  }
  const Rational den = Rational(l) * Rational(static_cast<long>(b.denominators[static_cast<std::size_t>(s)]));
  std::vector<Rational> y(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    y[static_cast<std::size_t>(i)] = Rational(Y[static_cast<std::size_t>(i)]) / den;
    y[static_cast<std::size_t>(i)].canonicalize();
  }
  return y;
}

std::vector<double> apply_real(const CurlBlock& b, int s, const std::vector<double>& x) {
  const int N = b.size();
  std::vector<double> y(static_cast<std::size_t>(N), 0.0);
  const auto& M = b.numerators[static_cast<std::size_t>(s)];
  for (int c = 0; c < N; ++c) {
    const double xc = x[static_cast<std::size_t>(c)];
    if (xc == 0.0) continue;
    for (int r = 0; r < N; ++r) {
      const std::int64_t m = M[static_cast<std::size_t>(c) * N + r];
      if (m != 0) y[static_cast<std::size_t>(r)] += static_cast<double>(m) * xc;
    }
  }
  const double d = static_cast<double>(b.denominators[static_cast<std::size_t>(s)]);
  for (auto& v : y) v /= d;
  return y;
}

}  // namespace

EigenDecomposition decompose(const FrameField& F) {
  EigenDecomposition out;
  const auto parts = split_parity<Rational>(&F, nullptr);
  for (const auto& part : parts) {
    if (part.degree < 0) continue;
    const CurlBlock& b = curl_block(part.degree);
    const auto x = to_vector(b, part.f);
    for (std::size_t s = 0; s < b.eigenvalues.size(); ++s) {
      FrameField c = exact_from_vector(b, apply_exact(b, static_cast<int>(s), x));
      if (c.is_zero()) continue;
      out.components[b.eigenvalues[s]] += c;
    }
  }
  out.residual = F;
  for (const auto& [mu, c] : out.components) out.residual -= c;
  return out;
}

RealEigenDecomposition decompose(const RealFrameField& F) {
  RealEigenDecomposition out;
  const auto parts = split_parity<double>(nullptr, &F);
  for (const auto& part : parts) {
    if (part.degree < 0) continue;
    const CurlBlock& b = curl_block(part.degree);
    const auto x = to_vector(b, part.f);
    for (std::size_t s = 0; s < b.eigenvalues.size(); ++s)
      out.components[b.eigenvalues[s]] += real_from_vector(b, apply_real(b, static_cast<int>(s), x));
  }
  out.residual = F;
  for (const auto& [mu, c] : out.components) out.residual -= c;
  return out;
}

FrameField project_eigen(const FrameField& F, int eigenvalue) {
  FrameField out;
  const auto parts = split_parity<Rational>(&F, nullptr);
  for (const auto& part : parts) {
    if (part.degree < 0) continue;
    const CurlBlock& b = curl_block(part.degree);
    const int s = b.slot(eigenvalue);
    if (s < 0) continue;
    out += exact_from_vector(b, apply_exact(b, s, to_vector(b, part.f)));
  }
  return out;
}

RealFrameField project_eigen(const RealFrameField& F, int eigenvalue) {
  RealFrameField out;
  const auto parts = split_parity<double>(nullptr, &F);
  for (const auto& part : parts) {
    if (part.degree < 0) continue;
    const CurlBlock& b = curl_block(part.degree);
    const int s = b.slot(eigenvalue);
    if (s < 0) continue;
    out += real_from_vector(b, apply_real(b, s, to_vector(b, part.f)));
  }
  return out;
}

ExactScalar helicity(const FrameField& F) {
  const auto d = decompose(F);
  if (d.components.count(0)) throw HelicityUndefined("helicity: field has a nonzero gradient part");
  ExactScalar h;
  for (const auto& [mu, c] : d.components) h += norm_sq(c) * ExactScalar(Rational(1) / mu);
  return h;
}

namespace {

void require_exact(const RealEigenDecomposition& d, const RealFrameField& F, double tol) {
  auto it = d.components.find(0);
  if (it == d.components.end()) return;
  const double g = norm_sq(it->second), f = norm_sq(F);
  if (g > tol * tol * std::max(f, 1e-300)) throw HelicityUndefined("helicity: field has a nonzero gradient part");
}

}  // namespace

double helicity(const RealFrameField& F, double tol) {
  const auto d = decompose(F);
  require_exact(d, F, tol);
  double h = 0.0;
  for (const auto& [mu, c] : d.components)
    if (mu != 0) h += norm_sq(c) / mu;
  return h;
}

FrameField curl_inverse(const FrameField& F) {
  const auto d = decompose(F);
  if (d.components.count(0)) throw HelicityUndefined("curl_inverse: field has a nonzero gradient part");
  FrameField out;
  for (const auto& [mu, c] : d.components) out += (Rational(1) / mu) * c;
  return out;
}

RealFrameField curl_inverse(const RealFrameField& F, double tol) {
  const auto d = decompose(F);
  require_exact(d, F, tol);
  RealFrameField out;
  for (const auto& [mu, c] : d.components)
    if (mu != 0) out += (1.0 / mu) * c;
  return out;
}

RayleighValue rayleigh_quotient(const FrameField& F) {
  const ExactScalar h = helicity(F);
  if (h.is_zero()) throw HelicityUndefined("rayleigh_quotient: zero helicity");
  const ExactScalar n = norm_sq(F);
  RayleighValue r;
  if (h.is_monomial()) {
    const auto& [k, c] = *h.terms().begin();
    r.exact_value = n.divided_by(ExactScalar(abs(c), k));
    r.exact = true;
    r.value = r.exact_value.to_double();
  } else {
    r.value = n.to_double() / std::abs(h.to_double());
  }
  return r;
}

double rayleigh_quotient(const RealFrameField& F) {
  const double h = helicity(F);
  if (h == 0.0) throw HelicityUndefined("rayleigh_quotient: zero helicity");
  return norm_sq(F) / std::abs(h);
}

std::string export_atlas_json(const std::vector<AtlasEntry>& entries) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json j;
    j["eigenvalue"] = e.eigenvalue;
    j["label"] = to_string(e.label);
    j["dimension"] = e.fields.size();
    nlohmann::json fields = nlohmann::json::array();
    for (std::size_t i = 0; i < e.fields.size(); ++i) {
      nlohmann::json f;
      f["name"] = e.names[i];
      f["coefficients"] = {to_string(e.fields[i][0].poly()), to_string(e.fields[i][1].poly()),
                           to_string(e.fields[i][2].poly())};
      f["squared_norm"] = e.squared_norms[i].to_string();
      fields.push_back(f);
    }
    j["fields"] = fields;
    out.push_back(j);
  }
  return out.dump(2);
}

}  // namespace beltrami
