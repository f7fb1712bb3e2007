#include <mutex>
#include <stdexcept>

#include "beltrami/eigen_atlas.hpp"

namespace beltrami {

namespace {

// c^2 = r / pi^2
ExactScalar normalizer(const Rational& r) { return ExactScalar(r, -2); }

FrameField field(const char* f1, const char* f2, const char* f3) { return parse_frame_field(f1, f2, f3); }

Rational exact_sqrt(const Rational& q) {
  mpz_class n = q.get_num(), d = q.get_den(), rn, rd;
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
    throw std::logic_error("explicit basis: combination coefficient is not rational");
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return Rational(rn, rd);
}

AtlasEntry finish(AtlasEntry e) {
  for (const auto& f : e.fields) e.squared_norms.push_back(norm_sq(f));
  return e;
}

AtlasEntry build_E2() {
  AtlasEntry e;
  e.eigenvalue = 2;
  e.label = Provenance::explicit_paper;
  for (int i = 0; i < 3; ++i) {
    e.fields.push_back(frame_vector(i));
    e.names.push_back("B" + std::to_string(i + 1));
    e.normalizer_squares.push_back(ExactScalar(Rational(1, 2), -2));
  }
  return finish(e);
}

AtlasEntry build_E3() {
  AtlasEntry e;
  e.eigenvalue = 3;
  e.label = Provenance::explicit_paper;
  const char* table[8][3] = {
      {"0", "x1", "-x2"},    {"0", "x2", "x1"},     {"0", "x3", "-x4"},    {"0", "x4", "x3"},
      {"-2*x2", "x3", "x4"}, {"2*x1", "-x4", "x3"}, {"2*x3", "x2", "-x1"}, {"2*x4", "x1", "x2"},
  };
  for (int i = 0; i < 8; ++i) {
    e.fields.push_back(field(table[i][0], table[i][1], table[i][2]));
    e.names.push_back("u" + std::to_string(i + 1));
    e.normalizer_squares.push_back(normalizer(i < 4 ? Rational(1) : Rational(1, 3)));
  }
  return finish(e);
}

AtlasEntry build_E4() {
  struct Row {
    Rational r;
    const char* f[3];
  };
  const Row table[15] = {
      {Rational(3, 2), {"0", "x1^2-x2^2", "-2*x1*x2"}},
      {Rational(3, 2), {"0", "x3^2-x4^2", "-2*x3*x4"}},
      {Rational(3, 2), {"0", "2*x1*x2", "x1^2-x2^2"}},
      {Rational(3, 2), {"0", "2*x3*x4", "x3^2-x4^2"}},
      {Rational(3), {"0", "x2*x4-x1*x3", "x1*x4+x2*x3"}},
      {Rational(3), {"0", "x1*x4+x2*x3", "x1*x3-x2*x4"}},
      {Rational(3), {"x1*x2+x3*x4", "0", "x2*x3-x1*x4"}},
      {Rational(3, 28), {"8*x1*x3", "2*(x1*x2-x3*x4)", "3*(x3^2-x1^2)+(x4^2-x2^2)"}},
      {Rational(1, 4), {"4*(x1*x4-x2*x3)", "x1^2-x2^2+x3^2-x4^2", "2*(x1*x2+x3*x4)"}},
      {Rational(1, 28), {"14*x2*x4+2*x1*x3", "4*(x1*x2-x3*x4)", "x1^2-x3^2+5*(x2^2-x4^2)"}},
      {Rational(3, 7), {"2*(x1^2-x3^2)", "-(x1*x4+x2*x3)", "3*x1*x3+x2*x4"}},
      {Rational(1, 28), {"7*(x2^2-x4^2)+x1^2-x3^2", "-4*(x1*x4+x2*x3)", "-(2*x1*x3+10*x2*x4)"}},
      {Rational(3), {"x3*x4-x1*x2", "x1*x3+x2*x4", "0"}},
      {Rational(3, 4), {"2*(x1*x4+x2*x3)", "x1^2-x4^2+x2^2-x3^2", "0"}},
      {Rational(3, 4), {"x2^2-x3^2+x4^2-x1^2", "2*(x1*x4-x2*x3)", "0"}},
  };
  AtlasEntry e;
  e.eigenvalue = 4;
  e.label = Provenance::explicit_paper;
  for (int i = 0; i < 15; ++i) {
    e.fields.push_back(field(table[i].f[0], table[i].f[1], table[i].f[2]));
    e.names.push_back("v" + std::to_string(i + 1));
    e.normalizer_squares.push_back(normalizer(table[i].r));
  }
  return finish(e);
}

// Eigenvalue-5 fields. Each w_i = sign * c_i * bracket_i with c_i^2 = r_i / pi^2 and
// bracket_i = P_i + sum_j alpha_j * pi * (c_j * bracket_j), alpha_j = s * sqrt(a) / den.
// The references use c_j * bracket_j without the leading sign of w_j; only that reading
// makes the tabulated coefficients orthogonal for the references to w14 and w16.
// The coefficient on bracket_j is s * sqrt(a * r_j) / den.
struct Ref {
  int sign, sqrt_arg, den, j;
};
struct WRow {
  int sign;
  Rational r;
  const char* f[3];
  std::vector<Ref> refs;
};

const std::vector<WRow>& e5_table() {
  static const std::vector<WRow> t = {
      {1, Rational(6), {"0", "x*z^2-x*w^2-2*y*z*w", "w^2*y-z^2*y-2*x*z*w"}, {}},
      {1, Rational(2), {"0", "3*x*y^2-x^3", "3*x^2*y-y^3"}, {}},
      {1, Rational(2), {"0", "y^3-3*x^2*y", "3*x*y^2-x^3"}, {}},
      {1, Rational(6), {"0", "y*z^2+2*x*z*w-w^2*y", "x*z^2-x*w^2-2*w*y*z"}, {}},
      {1, Rational(6), {"0", "y^2*w-2*x*y*z-x^2*w", "y^2*z-x^2*z+2*x*y*w"}, {}},
      {1, Rational(2), {"0", "3*z^2*w-w^3", "z^3-3*w^2*z"}, {}},
      {1, Rational(6), {"0", "x^2*z-y^2*z-2*x*y*w", "y^2*w-x^2*w-2*x*y*z"}, {}},
      {1, Rational(2), {"0", "z^3-3*w^2*z", "w^3-3*z^2*w"}, {}},
      {1, Rational(32, 15), {"x^3-3*x*w^2", "w^3-3*x^2*w", "0"}, {{-1, 6, 16, 5}, {1, 2, 16, 6}}},
      {1, Rational(32, 5), {"x^2*y-2*x*z*w-w^2*y", "w^2*z-2*x*y*w-x^2*z", "0"}, {{-1, 6, 48, 7}, {1, 2, 16, 8}}},
      {1, Rational(32, 5), {"x^2*z+2*x*y*w-w^2*z", "x^2*y-2*x*z*w-w^2*y", "0"}, {{1, 2, 16, 3}, {1, 6, 48, 4}}},
      {1, Rational(32, 5), {"x*y^2-x*z^2-2*w*y*z", "w*z^2-w*y^2-2*x*y*z", "0"}, {{-1, 6, 48, 5}, {-1, 2, 16, 6}}},
      {1, Rational(32, 5), {"y^2*w-z^2*w+2*x*y*z", "x*y^2-x*z^2-2*y*z*w", "0"}, {{-1, 6, 48, 1}, {-1, 2, 16, 2}}},
      {-1, Rational(32, 15), {"3*y^2*z-z^3", "y^3-3*y*z^2", "0"}, {{-1, 2, 16, 3}, {1, 6, 16, 4}}},
      // Tabulated with w2 in place of w8.
      {1, Rational(32, 15), {"3*y*z^2-y^3", "3*y^2*z-z^3", "0"}, {{1, 6, 16, 7}, {1, 2, 16, 8}}},
      {-1, Rational(32, 15), {"3*x^2*w-w^3", "x^3-3*x*w^2", "0"}, {{-1, 6, 16, 1}, {1, 2, 16, 2}}},
      // The tabulated denominator 38 on the w14 term breaks orthogonality; 48 restores it.
      {-1, Rational(36, 5), {"w^2*z+2*x*y*w-y^2*z", "0", "x*y^2-x*w^2+2*w*y*z"},
       {{-1, 2, 16, 3}, {1, 6, 48, 4}, {-1, 10, 48, 11}, {1, 30, 48, 14}}},
      {1, Rational(12, 5), {"3*x^2*z-z^3", "0", "3*x*z^2-x^3"},
       {{-1, 2, 16, 3}, {-1, 6, 16, 4}, {-1, 10, 16, 11}, {-1, 30, 48, 14}}},
      {1, Rational(36, 5), {"x*y^2-x*w^2+2*w*y*z", "0", "y^2*z-2*x*y*w-w^2*z"},
       {{1, 6, 48, 5}, {-1, 2, 16, 6}, {-1, 30, 48, 9}, {1, 10, 48, 12}}},
      {-1, Rational(36, 5), {"z^2*w+2*x*y*z-x^2*w", "0", "y*z^2-x^2*y-2*x*z*w"},
       {{-1, 6, 48, 1}, {1, 2, 16, 2}, {-1, 10, 48, 13}, {1, 30, 48, 16}}},
      {-1, Rational(12, 5), {"3*w^2*y-y^3", "0", "3*y^2*w-w^3"},
       {{-1, 6, 16, 7}, {1, 2, 16, 8}, {1, 10, 16, 10}, {-1, 30, 48, 15}}},
      {1, Rational(12, 5), {"3*x*z^2-x^3", "0", "z^3-3*x^2*z"},
       {{-1, 6, 16, 5}, {-1, 2, 16, 6}, {1, 30, 48, 9}, {1, 10, 16, 12}}},
      {-1, Rational(36, 5), {"y*z^2-x^2*y-2*x*z*w", "0", "x^2*w-w*z^2-2*x*y*z"},
       {{-1, 6, 48, 7}, {-1, 2, 16, 8}, {-1, 10, 48, 10}, {-1, 30, 48, 15}}},
      {1, Rational(12, 5), {"3*y^2*w-w^3", "0", "y^3-3*w^2*y"},
       {{1, 6, 16, 1}, {1, 2, 16, 2}, {-1, 10, 16, 13}, {-1, 30, 48, 16}}},
  };
  return t;
}

AtlasEntry build_E5() {
  const auto& t = e5_table();
  AtlasEntry e;
  e.eigenvalue = 5;
  e.label = Provenance::explicit_paper;
  std::vector<FrameField> brackets;
  for (std::size_t i = 0; i < t.size(); ++i) {
    FrameField w = field(t[i].f[0], t[i].f[1], t[i].f[2]);
    for (const Ref& ref : t[i].refs) {
      const auto& row = t[static_cast<std::size_t>(ref.j - 1)];
      const Rational c = Rational(ref.sign) * exact_sqrt(ref.sqrt_arg * row.r) / ref.den;
      w += c * brackets[static_cast<std::size_t>(ref.j - 1)];
    }
    brackets.push_back(w);
    // Clear denominators so the stored field has integer coefficients.
    mpz_class l = 1;
    for (int a = 0; a < 3; ++a)
      for (const auto& [k, c] : w[a].poly().terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
    const Rational scale(l);  // stored field = sign * scale * bracket
    e.fields.push_back(Rational(t[i].sign) * scale * w);
    e.names.push_back("w" + std::to_string(i + 1));
    e.normalizer_squares.push_back(normalizer(t[i].r / (scale * scale)));
  }
  return finish(e);
}

AtlasEntry reflect(const AtlasEntry& pos) {
  AtlasEntry e;
  e.eigenvalue = -pos.eigenvalue;
  e.label = Provenance::reflected;
  e.normalizer_squares = pos.normalizer_squares;
  for (std::size_t i = 0; i < pos.fields.size(); ++i) {
    e.fields.push_back(isometry_pushforward(pos.fields[i], reflection_T()));
    e.names.push_back("T*" + pos.names[i]);
  }
  return finish(e);
}

// The anti-Hopf fields, relabelled from T_*B1 = Bhat3, T_*B2 = Bhat2, T_*B3 = -Bhat1.
AtlasEntry build_Em2(const AtlasEntry& e2) {
  AtlasEntry r = reflect(e2);
  AtlasEntry e = r;
  e.fields = {-r.fields[2], r.fields[1], r.fields[0]};
  e.names = {"Bhat1", "Bhat2", "Bhat3"};
  e.squared_norms = {r.squared_norms[2], r.squared_norms[1], r.squared_norms[0]};
  return e;
}

struct Catalogue {
  std::map<int, AtlasEntry> entries;
  std::map<std::string, FrameField> by_name;
};

const Catalogue& catalogue() {
  static const Catalogue c = [] {
    Catalogue out;
    const AtlasEntry e2 = build_E2();
    out.entries[2] = e2;
    out.entries[-2] = build_Em2(e2);
    out.entries[3] = build_E3();
    out.entries[4] = build_E4();
    out.entries[5] = build_E5();
    for (int mu : {3, 4, 5}) out.entries[-mu] = reflect(out.entries[mu]);
    for (const auto& [mu, e] : out.entries)
      for (std::size_t i = 0; i < e.fields.size(); ++i) out.by_name[e.names[i]] = e.fields[i];
    return out;
  }();
  return c;
}

}  // namespace

AtlasEntry explicit_basis(int eigenvalue) {
  const auto& c = catalogue();
  auto it = c.entries.find(eigenvalue);
  if (it == c.entries.end())
    throw UnsupportedEigenvalue("explicit_basis: no explicit basis for eigenvalue " + std::to_string(eigenvalue) +
                                "; use eigenspace_solve");
  return it->second;
}

const FrameField& explicit_field(const std::string& name) {
  const auto& c = catalogue();
  auto it = c.by_name.find(name);
  if (it == c.by_name.end()) throw std::invalid_argument("explicit_field: unknown field " + name);
  return it->second;
}

}  // namespace beltrami
