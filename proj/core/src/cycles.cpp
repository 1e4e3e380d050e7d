#include "cusp/cycles.hpp"

#include <algorithm>
#include <sstream>

namespace cusp {

Int charge(const Cycle& c) {
  Int q = 12;
  for (const Int& di : c.d) q += di - 3;
  return q;
}

bool is_negative_definite(const Cycle& c) {
  if (c.d.empty()) return false;
  bool some_big = false;
  for (const Int& di : c.d) {
    if (di < 2) return false;
    if (di >= 3) some_big = true;
  }
  return some_big;
}

Cycle dual_cycle(const Cycle& c) {
  ensure(is_negative_definite(c), Err::BadInput,
         "dual cycle requires all entries >= 2 with some entry >= 3");
  std::size_t n = c.size();
  std::size_t start = 0;
  while (c.d[start] < 3) ++start;  // exists by negative definiteness

  // Walk blocks (a_j, 2^{b_j}) in cyclic order from `start`.
  std::vector<std::pair<Int, Int>> blocks;
  std::size_t i = 0;
  while (i < n) {
    Int a = c.d[(start + i) % n];  // block head, >= 3
    ++i;
    Int b = 0;
    while (i < n && c.d[(start + i) % n] == 2) {
      ++b;
      ++i;
    }
    blocks.emplace_back(a, b);
  }
  // Each run of 2s becomes a head entry, and each head entry a >= 3 becomes
  // the run of (a - 3) 2s that follows it.  Reading the input cyclically, the
  // run of b_j 2s is followed by the head a_{j+1}, so the emitted pairs are
  // (b_j + 3, 2^{a_{j+1} - 3}).  Under the R/L dictionary this is exactly the
  // exchange of the two letters, so the product of [[0,-1],[1,d'_i]] over the
  // dual is conjugate to the monodromy of c.
  const std::size_t k = blocks.size();
  Cycle out;
  for (std::size_t j = 0; j < k; ++j) {
    out.d.push_back(blocks[j].second + 3);
    const Int& a_next = blocks[(j + 1) % k].first;
    for (Int t = 0; t < a_next - 3; ++t) out.d.push_back(2);
  }
  return out;
}

Mat2 monodromy(const Cycle& c) {
  Mat2 m = Mat2::identity();
  for (const Int& di : c.d) m = m * Mat2{0, 1, -1, di};
  return m;
}

Cycle canonical_cycle(const Cycle& c) {
  if (c.d.empty()) return c;
  std::size_t n = c.size();
  std::vector<Int> best;
  for (int rev = 0; rev < 2; ++rev) {
    std::vector<Int> seq = c.d;
    if (rev) std::reverse(seq.begin(), seq.end());
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<Int> rot(seq.begin() + r, seq.end());
      rot.insert(rot.end(), seq.begin(), seq.begin() + r);
      if (best.empty() || rot < best) best = std::move(rot);
    }
  }
  return Cycle{best};
}

bool cycles_equal(const Cycle& a, const Cycle& b) {
  if (a.size() != b.size()) return false;
  return canonical_cycle(a) == canonical_cycle(b);
}

Cycle apply_surgery(const Cycle& c, const CycleSurgery& s) {
  std::size_t n = c.size();
  ensure(n >= 1 && s.index < n, Err::BadInput, "surgery index out of range");
  Cycle out = c;
  switch (s.kind) {
    case SurgeryKind::InternalBlowup:
      out.d[s.index] += 1;
      return out;
    case SurgeryKind::CornerBlowup: {
      ensure(n >= 2, Err::BadInput, "corner blow-up needs >= 2 components");
      std::size_t j = (s.index + 1) % n;
      out.d[s.index] += 1;
      out.d[j] += 1;
      out.d.insert(out.d.begin() + static_cast<std::ptrdiff_t>(s.index) + 1,
                   Int(1));
      return out;
    }
    case SurgeryKind::NodeSmoothing: {
      ensure(n >= 2, Err::BadInput, "node smoothing needs >= 2 components");
      std::size_t j = (s.index + 1) % n;
      Int merged = c.d[s.index] + c.d[j] - 2;
      out.d.clear();
      // Keep the merged entry at position s.index; drop entry j.
      for (std::size_t i = 0; i < n; ++i) {
        if (i == j) continue;
        out.d.push_back(i == s.index ? merged : c.d[i]);
      }
      return out;
    }
  }
  fail(Err::Internal, "unhandled surgery kind");
}

Cycle parse_cycle(const std::string& text) {
  Cycle c;
  std::string token;
  std::stringstream ss(text);
  while (std::getline(ss, token, ',')) {
    // Trim whitespace.
    std::size_t b = token.find_first_not_of(" \t\r\n");
    std::size_t e = token.find_last_not_of(" \t\r\n");
    ensure(b != std::string::npos, Err::BadInput, "empty entry in cycle");
    token = token.substr(b, e - b + 1);
    try {
      c.d.emplace_back(token);
    } catch (const std::exception&) {
      fail(Err::BadInput, "bad cycle entry '" + token + "'");
    }
  }
  ensure(!c.d.empty(), Err::BadInput, "empty cycle");
  return c;
}

std::string format_cycle(const Cycle& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ",";
    out += c.d[i].str();
  }
  return out;
}

// ---------------------------------------------------------------------------
// R/L words.

Mat2 word_matrix(const std::string& word) {
  const Mat2 R{1, 1, 0, 1}, L{1, 0, 1, 1};
  Mat2 m = Mat2::identity();
  for (char ch : word) {
    if (ch == 'R')
      m = m * R;
    else if (ch == 'L')
      m = m * L;
    else
      fail(Err::BadInput, "word may only contain R and L");
  }
  return m;
}

std::string canonical_word(const std::string& word) {
  if (word.empty()) return word;
  std::string best = word;
  std::string rot = word;
  for (std::size_t i = 1; i < word.size(); ++i) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (rot < best) best = rot;
  }
  return best;
}

namespace {

// Quadratic surd (p + q*sqrt(disc)) / r with integer parts; disc > 0 and not
// a perfect square, so values are irrational whenever q != 0.
struct Surd {
  Int p, q, r;  // r != 0
};

// Sign of A + B*sqrt(disc).
int sign_a_plus_b_sqrt(const Int& a, const Int& b, const Int& disc) {
  int sa = a == 0 ? 0 : (a > 0 ? 1 : -1);
  int sb = b == 0 ? 0 : (b > 0 ? 1 : -1);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: compare a^2 with b^2 * disc; equality would force disc
  // to be a perfect square, which the callers exclude.
  Int lhs = a * a, rhs = b * b * disc;
  ensure(lhs != rhs, Err::Internal, "square discriminant in surd comparison");
  // |a| decides against |b|sqrt(disc): the sum takes the sign of the larger.
  return (lhs > rhs) ? sa : sb;
}

// Compare surd s against rational u/v (v > 0): sign(s - u/v).
int surd_cmp_rat(const Surd& s, const Int& u, const Int& v, const Int& disc) {
  // s - u/v = (v*p - u*r + v*q*sqrt(disc)) / (r*v)
  Int A = v * s.p - u * s.r;
  Int B = v * s.q;
  int numer = sign_a_plus_b_sqrt(A, B, disc);
  int denom = (s.r * v > 0) ? 1 : -1;
  return numer * denom;
}

}  // namespace

std::string sl2z_word(const Mat2& m_in) {
  ensure(det2(m_in) == 1, Err::BadInput, "sl2z_word requires det = 1");
  Int t = trace(m_in);
  ensure(t > 2, Err::BadInput, "sl2z_word requires trace > 2");
  Int disc = t * t - 4;  // never a perfect square for t > 2

  const Mat2 R{1, 1, 0, 1}, L{1, 0, 1, 1};
  const Mat2 Rinv{1, -1, 0, 1}, Linv{1, 0, -1, 1};

  // Slope beta = x/y of the attracting eigenvector (x, y), as a surd.
  // With lambda = (t + sqrt(disc))/2:
  //   b != 0: direction (b, lambda - a)  => beta = 2b / ((t - 2a) + sqrt(disc))
  //   b == 0: direction (lambda - d, c)  => beta = ((t - 2d) + sqrt(disc)) / 2c
  // (b == c == 0 would make lambda an integer — impossible for t > 2.)
  Mat2 m = m_in;
  Surd beta{};
  if (m.b != 0) {
    Int w = t - 2 * m.a;
    Int e = w * w - disc;  // nonzero: disc is not a square
    beta = Surd{m.b * 2 * w, -2 * m.b, e};
  } else {
    ensure(m.c != 0, Err::Internal, "diagonal matrix with trace > 2 in SL2(Z)");
    beta = Surd{t - 2 * m.d, 1, 2 * m.c};
  }

  // Shift the attracting slope into (0, 1): conjugating by R^k moves
  // beta -> beta - k and preserves the cyclic word.
  // floor(beta): binary search on integers via exact comparisons.
  {
    Int lo = -1, hi = 1;
    while (surd_cmp_rat(beta, lo, 1, disc) < 0) lo *= 2;
    while (surd_cmp_rat(beta, hi, 1, disc) > 0) hi *= 2;
    while (lo + 1 < hi) {
      Int mid = floor_div(lo + hi, 2);
      if (surd_cmp_rat(beta, mid, 1, disc) >= 0)
        lo = mid;
      else
        hi = mid;
    }
    Int k = lo;  // floor(beta); beta is irrational so never equal
    m = mat_pow(Rinv, k) * m * mat_pow(R, k);
    beta.p -= k * beta.r;  // beta -= k
  }

  // Stern-Brocot descent: V's columns span a cone containing the attracting
  // direction; once the cone is disjoint from the repelling direction the
  // conjugated matrix maps it into itself, i.e. has nonnegative entries.
  Mat2 v = Mat2::identity();  // columns (1,0), (0,1); slopes (inf, 0)
  Mat2 w = m;
  std::size_t cap = 64 * (1 + m.a.str().size() + m.b.str().size() +
                          m.c.str().size() + m.d.str().size()) + 4096;
  std::size_t steps = 0;
  while (!(w.a >= 0 && w.b >= 0 && w.c >= 0 && w.d >= 0)) {
    ensure(steps++ < cap, Err::Internal, "sl2z_word descent did not converge");
    // Mediant of the cone's columns.
    Int mx = v.a + v.b, my = v.c + v.d;
    if (surd_cmp_rat(beta, mx, my, disc) > 0)
      v = v * R;  // keep the steep half-cone (v1, mediant)
    else
      v = v * L;  // keep the shallow half-cone (mediant, v2)
    w = inverse_unimodular(v) * m * v;
  }

  // Peel the nonnegative matrix: SL2(N) is freely generated by R and L, and
  // exactly one row dominates the other at each step (until the identity).
  std::string word;
  steps = 0;
  while (!(w == Mat2::identity())) {
    ensure(steps++ < cap, Err::Internal, "sl2z_word peeling did not terminate");
    if (w.a >= w.c && w.b >= w.d) {
      word += 'R';
      w = Rinv * w;
    } else if (w.c >= w.a && w.d >= w.b) {
      word += 'L';
      w = Linv * w;
    } else {
      fail(Err::Internal, "nonnegative SL2 matrix with incomparable rows");
    }
  }
  ensure(!word.empty(), Err::Internal, "empty word for trace > 2 matrix");
  return canonical_word(word);
}

}  // namespace cusp
