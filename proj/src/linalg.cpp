#include "lagrep/linalg.hpp"

namespace lagrep {

std::optional<LinearSolution> solve_linear(const QMatrix& a, const std::vector<Rational>& b) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  if (b.size() != rows) throw InputError("right-hand side has the wrong length");
  // Augmented reduced row echelon form.
  std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols + 1));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m[i][j] = a(i, j);
    m[i][cols] = b[i];
  }
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    const Rational piv = m[r][c];
    for (std::size_t k = c; k <= cols; ++k) m[r][k] /= piv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c];
      for (std::size_t k = c; k <= cols; ++k) m[i][k] -= f * m[r][k];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i) {
    if (m[i][cols] != 0) return std::nullopt;
  }
  LinearSolution s;
  s.particular.assign(cols, Rational(0));
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
    s.particular[pivot_cols[i]] = m[i][cols];
    is_pivot[pivot_cols[i]] = true;
  }
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[f] = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = -m[i][f];
    s.kernel.push_back(std::move(v));
  }
  return s;
}

Signature signature(const QMatrix& symmetric) {
  if (!symmetric.is_symmetric()) throw InputError("signature of a non-symmetric matrix");
  QMatrix m = symmetric;
  const std::size_t n = m.rows();
  Signature s;
  std::size_t done = 0;
  while (done < n) {
    // Find a nonzero diagonal pivot; otherwise create one from an off-diagonal entry.
    std::size_t p = done;
    while (p < n && m(p, p) == 0) ++p;
    if (p == n) {
      std::size_t i = n, j = n;
      for (std::size_t a = done; a < n && i == n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
          if (m(a, b) != 0) {
            i = a;
            j = b;
            break;
          }
      if (i == n) {
        s.zero += n - done;
        break;
      }
      // Row/column operation e_i += e_j makes the (i,i) entry 2 m(i,j) + m(j,j) != 0.
      for (std::size_t k = 0; k < n; ++k) m(i, k) += m(j, k);
      for (std::size_t k = 0; k < n; ++k) m(k, i) += m(k, j);
      p = i;
    }
    // Symmetric swap of p into position `done`.
    if (p != done) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m(p, k), m(done, k));
      for (std::size_t k = 0; k < n; ++k) std::swap(m(k, p), m(k, done));
    }
    const Rational d = m(done, done);
    if (d > 0) ++s.positive;
    else ++s.negative;
    for (std::size_t r = done + 1; r < n; ++r) {
      const Rational f = m(r, done) / d;
      if (f == 0) continue;
      for (std::size_t k = done; k < n; ++k) m(r, k) -= f * m(done, k);
      for (std::size_t k = done; k < n; ++k) m(k, r) -= f * m(k, done);
    }
    ++done;
  }
  return s;
}

}  // namespace lagrep
