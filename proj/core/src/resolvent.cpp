#include "vmv/resolvent.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "vmv/errors.hpp"
#include "vmv/parallel.hpp"
#include "vmv/quadrature.hpp"

namespace vmv {
namespace {

constexpr std::size_t G = 10;
using Weights = std::array<double, G>;

const GaussRule& rule() { return gauss10(); }

void require_regular_at_zero(const Kernel& k) {
  if (k.meta().singular_at_zero)
    throw std::invalid_argument("kernel '" + k.name() +
                                "' is singular at s = 0; grid tables need finite node values");
}

double checked(const QuadResult& q, const char* what) {
  if (!q.converged) throw QuadratureError(what, q.error);
  return q.value;
}

// int_0^1 x^a l_g(x) dx for the Lagrange basis through the Gauss nodes.
// Expands l_g in shifted Legendre polynomials, whose power moments are
// products of rational factors in a (no cancellation for any a > -1).
Weights power_moments(double a) {
  const auto& r = rule();
  std::array<double, G> mom{};
  mom[0] = 1.0 / (a + 1.0);
  for (std::size_t n = 1; n < G; ++n) mom[n] = mom[n - 1] * (a + 1.0 - n) / (a + 1.0 + n);
  Weights out{};
  for (std::size_t g = 0; g < G; ++g) {
    const double y = 2.0 * r.nodes[g] - 1.0;
    double p0 = 1.0, p1 = y;
    double acc = mom[0] + 3.0 * p1 * mom[1];
    for (std::size_t n = 2; n < G; ++n) {
      const double p2 = ((2.0 * n - 1.0) * y * p1 - (n - 1.0) * p0) / n;
      acc += (2.0 * n + 1.0) * p2 * mom[n];
      p0 = p1;
      p1 = p2;
    }
    out[g] = r.weights[g] * acc;
  }
  return out;
}

std::vector<Weights> power_moments(const std::vector<double>& exponents) {
  std::vector<Weights> out(exponents.size());
  for (std::size_t q = 0; q < exponents.size(); ++q) out[q] = power_moments(exponents[q]);
  return out;
}

double fit_exponent(double v_near, double v_far, double d_near, double d_far) {
  if (v_near == 0.0 && v_far == 0.0) return 1.0;
  if (!(v_near > 0.0 && v_far > 0.0) && !(v_near < 0.0 && v_far < 0.0)) return 1.0;
  const double a = std::log(v_far / v_near) / std::log(d_far / d_near);
  if (!std::isfinite(a)) return 1.0;
  return std::clamp(a, -0.95, 20.0);
}

// Exponent a_j of V(u, s_j) ~ c (u - s_j)^a on the first cell of column j.
std::vector<double> column_exponents(const TriGrid& grid, const TriTable& v) {
  const std::size_t m = grid.cells();
  std::vector<double> a(m, 1.0);
  for (std::size_t j = 0; j + 2 <= m; ++j) {
    const double d1 = grid.width(j);
    a[j] = fit_exponent(v(j + 1, j), v(j + 2, j), d1, d1 + grid.width(j + 1));
  }
  if (m >= 2) a[m - 1] = a[m - 2];
  return a;
}

// Exponent b_i of V(t_i, u) ~ c (t_i - u)^b on the last cell of row i.
std::vector<double> row_exponents(const TriGrid& grid, const TriTable& v) {
  const std::size_t m = grid.cells();
  std::vector<double> b(m + 1, 1.0);
  for (std::size_t i = 2; i <= m; ++i) {
    const double d1 = grid.width(i - 1);
    b[i] = fit_exponent(v(i, i - 1), v(i, i - 2), d1, d1 + grid.width(i - 2));
  }
  if (m >= 2) b[1] = b[2];
  return b;
}

// K(t_i, u) sampled at Gauss points of every cell left of the singular one,
// plus Lagrange weights and hat moments on cell i-1.
struct RowSamples {
  // [i][k*G + g] = w_g h_k K(t_i, u_kg) for cells k <= i-2
  std::vector<std::vector<double>> values;
  std::vector<Weights> lag;  // [i]: int_{cell i-1} K(t_i,u) l_g du
  TriTable left, right;                     // (i,k): int_{cell k} K(t_i,u) (1-x | x) du

  RowSamples(const Kernel& k, const TriGrid& grid) {
    const std::size_t m = grid.cells();
    const auto& r = rule();
    values.resize(m + 1);
    lag.resize(m + 1);
    left = TriTable(m);
    right = TriTable(m);
    parallel_for(m, [&](std::size_t idx) {
      const std::size_t i = idx + 1;
      const double t = grid.node(i);
      auto& row = values[i];
      row.resize((i - 1) * G);
      for (std::size_t c = 0; c + 1 < i; ++c) {
        const double a = grid.node(c), h = grid.width(c);
        double l0 = 0.0, l1 = 0.0;
        for (std::size_t g = 0; g < G; ++g) {
          const double u = a + h * r.nodes[g];
          const double kv = k.at(t, u, t - u);
          row[c * G + g] = r.weights[g] * h * kv;
          l0 += r.weights[g] * (1.0 - r.nodes[g]) * kv;
          l1 += r.weights[g] * r.nodes[g] * kv;
        }
        left(i, c) = l0 * h;
        right(i, c) = l1 * h;
      }
      const double a = grid.node(i - 1), h = grid.width(i - 1);
      const double scale = h * std::max(1.0, std::abs(k.at(t, a + 0.5 * h, 0.5 * h)));
      const auto q = graded_integral_n(
          [&](double d, std::span<double> out) {
            lagrange_basis(r, (h - d) / h, out);
            const double kv = k.at(t, t - d, d);
            for (double& o : out) o *= kv;
          },
          G, h, 1e-14 * scale, 80);
      for (std::size_t g = 0; g < G; ++g) lag[i][g] = checked(q[g], "kernel row moment");
      double l0 = 0.0, l1 = 0.0;
      for (std::size_t g = 0; g < G; ++g) {
        l0 += lag[i][g] * (1.0 - r.nodes[g]);
        l1 += lag[i][g] * r.nodes[g];
      }
      left(i, i - 1) = l0;
      right(i, i - 1) = l1;
    });
  }
};

// K(u, s_j) sampled at Gauss points of every cell right of the singular one,
// plus Lagrange weights and hat moments on cell j.
struct ColSamples {
  std::vector<std::vector<double>> values;  // [j][(k-j-1)*G + g], k >= j+1
  std::vector<Weights> lag;                 // [j]: int_{cell j} K(u,s_j) l_g du
  std::vector<std::vector<double>> left, right;  // [j][k-j]: int_{cell k} K(u,s_j) (1-x | x) du

  ColSamples(const Kernel& k, const TriGrid& grid) {
    const std::size_t m = grid.cells();
    const auto& r = rule();
    values.resize(m);
    lag.resize(m);
    left.resize(m);
    right.resize(m);
    parallel_for(m, [&](std::size_t j) {
      const double s = grid.node(j);
      auto& col = values[j];
      col.resize((m - j - 1) * G);
      left[j].resize(m - j);
      right[j].resize(m - j);
      for (std::size_t c = j + 1; c < m; ++c) {
        const double a = grid.node(c), h = grid.width(c);
        double l0 = 0.0, l1 = 0.0;
        for (std::size_t g = 0; g < G; ++g) {
          const double u = a + h * r.nodes[g];
          const double kv = k.at(u, s, u - s);
          col[(c - j - 1) * G + g] = kv;
          l0 += r.weights[g] * (1.0 - r.nodes[g]) * kv;
          l1 += r.weights[g] * r.nodes[g] * kv;
        }
        left[j][c - j] = l0 * h;
        right[j][c - j] = l1 * h;
      }
      const double h = grid.width(j);
      const double scale = h * std::max(1.0, std::abs(k.at(s + 0.5 * h, s, 0.5 * h)));
      const auto q = graded_integral_n(
          [&](double d, std::span<double> out) {
            lagrange_basis(r, d / h, out);
            const double kv = k.at(s + d, s, d);
            for (double& o : out) o *= kv;
          },
          G, h, 1e-14 * scale, 80);
      for (std::size_t g = 0; g < G; ++g) lag[j][g] = checked(q[g], "kernel column moment");
      double l0 = 0.0, l1 = 0.0;
      for (std::size_t g = 0; g < G; ++g) {
        l0 += lag[j][g] * (1.0 - r.nodes[g]);
        l1 += lag[j][g] * r.nodes[g];
      }
      left[j][0] = l0;
      right[j][0] = l1;
    });
  }
};

double dot(const double* x, const double* y, std::size_t n) {
  // fixed lane split, so the result does not depend on the compiler's choices
  double lane[8] = {};
  std::size_t q = 0;
  for (; q + 8 <= n; q += 8)
    for (std::size_t k = 0; k < 8; ++k) lane[k] += x[q + k] * y[q + k];
  for (; q < n; ++q) lane[0] += x[q] * y[q];
  return ((lane[0] + lane[1]) + (lane[2] + lane[3])) + ((lane[4] + lane[5]) + (lane[6] + lane[7]));
}

// Both factors evaluable.
TriTable conv_ee(const Kernel& ka, const RowSamples& ra, const Kernel& kb, const ColSamples& cb,
                 const TriGrid& grid) {
  const std::size_t m = grid.cells();
  const auto& r = rule();
  TriTable out(m);
  // rows are processed in blocks so each column sample is streamed once per block
  constexpr std::size_t block = 8;
  const std::size_t blocks = (m + block - 1) / block;
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t i0 = 1 + b * block, i1 = std::min(m, i0 + block - 1);
    for (std::size_t j = 0; j + 2 <= i1; ++j) {
      const auto& col = cb.values[j];
      const double hj = grid.width(j);
      for (std::size_t i = std::max(i0, j + 2); i <= i1; ++i) {
        const auto& row = ra.values[i];
        double acc = 0.0;
        for (std::size_t g = 0; g < G; ++g) acc += cb.lag[j][g] * row[j * G + g] / (r.weights[g] * hj);
        acc += dot(row.data() + (j + 1) * G, col.data(), (i - j - 2) * G);
        const double* y = col.data() + (i - 2 - j) * G;
        for (std::size_t g = 0; g < G; ++g) acc += ra.lag[i][g] * y[g];
        out(i, j) = acc;
      }
    }
    for (std::size_t i = i0; i <= i1; ++i) {
      const double t = grid.node(i), s = grid.node(i - 1);
      const auto q = graded_interval(
          [&](double u, double da, double db) { return ka.at(t, u, db) * kb.at(u, s, da); }, s, t,
          1e-15, 80);
      out(i, i - 1) = checked(q, "convolution on diagonal cell");
    }
  });
  return out;
}

// Interior cells with nodal hat coefficients: for every cell c in [1, lc]
// add lw[c] * V[c][j] + rw[c] * V[c+1][j] to out[j] for all j < c - skip.
void accumulate_interior(const std::vector<double>& lw, const std::vector<double>& rw,
                         std::size_t lc, std::size_t skip, const TriTable& v,
                         std::span<double> out) {
  for (std::size_t node = 1 + skip; node <= lc + 1; ++node) {
    const double cl = node <= lc ? lw[node] : 0.0;
    const double cr = node >= 2 ? rw[node - 1] : 0.0;
    const auto vrow = v.row(node);
    // cell `node` reaches j <= node-1-skip, cell node-1 reaches j <= node-2-skip
    for (std::size_t j = 0; j + 2 + skip <= node; ++j) out[j] += (cl + cr) * vrow[j];
    if (node <= lc) out[node - 1 - skip] += cl * vrow[node - 1 - skip];
  }
}

// Cells next to the first one, where a tabulated column still carries its
// lag^a behaviour, interpolate V / lag^a instead of V.
constexpr std::size_t kNearCells = 8;

// Evaluable left factor, tabulated right factor.
TriTable conv_et(const Kernel& ka, const RowSamples& ra, const TriTable& v, const TriGrid& grid) {
  const std::size_t m = grid.cells();
  const auto& r = rule();
  const auto a = column_exponents(grid, v);
  const auto pm = power_moments(a);

  // near-cell interpolation weights: V(u) ~ V[c][j] lo + V[c+1][j] hi
  std::vector<std::vector<double>> lo(m), hi(m);
  parallel_for(m, [&](std::size_t j) {
    const double s = grid.node(j);
    const std::size_t last = std::min(m - 1, j + kNearCells);
    lo[j].resize((last - j) * G);
    hi[j].resize((last - j) * G);
    for (std::size_t c = j + 1; c <= last; ++c) {
      const double d0 = grid.node(c) - s, d1 = grid.node(c + 1) - s, h = grid.width(c);
      for (std::size_t g = 0; g < G; ++g) {
        const double x = r.nodes[g], d = d0 + h * x;
        lo[j][(c - j - 1) * G + g] = std::pow(d / d0, a[j]) * (1.0 - x);
        hi[j][(c - j - 1) * G + g] = std::pow(d / d1, a[j]) * x;
      }
    }
  });

  TriTable out(m);
  parallel_for(m, [&](std::size_t idx) {
    const std::size_t i = idx + 1;
    const double t = grid.node(i);
    auto o = out.row(i);
    const auto& row = ra.values[i];
    for (std::size_t j = 0; j + 2 <= i; ++j) {
      const auto& p = pm[j];
      double acc = 0.0;
      for (std::size_t g = 0; g < G; ++g) acc += p[g] * row[j * G + g] / r.weights[g];
      acc *= v(j + 1, j);
      const std::size_t last = std::min(i - 1, j + kNearCells);
      for (std::size_t c = j + 1; c <= last; ++c) {
        const double* wl = lo[j].data() + (c - j - 1) * G;
        const double* wh = hi[j].data() + (c - j - 1) * G;
        const double v0 = v(c, j), v1 = v(c + 1, j);
        double cell = 0.0;
        if (c + 2 <= i) {
          const double* kv = row.data() + c * G;
          for (std::size_t g = 0; g < G; ++g) cell += kv[g] * (v0 * wl[g] + v1 * wh[g]);
        } else {
          for (std::size_t g = 0; g < G; ++g) cell += ra.lag[i][g] * (v0 * wl[g] + v1 * wh[g]);
        }
        acc += cell;
      }
      o[j] = acc;
    }
    std::vector<double> lw(i), rw(i);
    for (std::size_t c = 1; c < i; ++c) {
      lw[c] = ra.left(i, c);
      rw[c] = ra.right(i, c);
    }
    if (i >= 2 + kNearCells) accumulate_interior(lw, rw, i - 1, kNearCells, v, o);

    const std::size_t j = i - 1;
    const double s = grid.node(j), h = grid.width(j), c0 = v(i, j), aj = a[j];
    const auto q = graded_interval(
        [&](double u, double da, double db) {
          (void)u;
          return ka.at(t, t - db, db) * c0 * std::pow(da / h, aj);
        },
        s, t, 1e-14 * std::max(1.0, std::abs(c0)), 80);
    o[j] = checked(q, "convolution on diagonal cell");
  });
  return out;
}

// Tabulated left factor, evaluable right factor.
TriTable conv_te(const TriTable& v, const Kernel& kb, const ColSamples& cb, const TriGrid& grid) {
  const std::size_t m = grid.cells();
  const auto b = row_exponents(grid, v);
  const auto pm = power_moments(b);
  TriTable out(m);
  parallel_for(m, [&](std::size_t idx) {
    const std::size_t i = idx + 1;
    const auto vr = v.row(i);
    const auto& p = pm[i];
    const double h_last = grid.width(i - 1);
    for (std::size_t j = 0; j + 2 <= i; ++j) {
      const auto& cl = cb.left[j];
      const auto& cr = cb.right[j];
      double acc = 0.0;
      for (std::size_t c = j; c + 2 <= i; ++c) acc += vr[c] * cl[c - j] + vr[c + 1] * cr[c - j];
      const double* y = cb.values[j].data() + (i - 2 - j) * G;
      double last = 0.0;
      // (1-x)^b moments are the mirror image of x^b moments on a symmetric rule
      for (std::size_t g = 0; g < G; ++g) last += p[G - 1 - g] * y[g];
      out(i, j) = acc + vr[i - 1] * h_last * last;
    }
    const std::size_t j = i - 1;
    const double s = grid.node(j), t = grid.node(i), c0 = vr[i - 1], bi = b[i];
    const auto q = graded_interval(
        [&](double u, double da, double db) {
          (void)u;
          return c0 * std::pow(db / h_last, bi) * kb.at(s + da, s, da);
        },
        s, t, 1e-14 * std::max(1.0, std::abs(c0)), 80);
    out(i, j) = checked(q, "convolution on diagonal cell");
  });
  return out;
}

// Both factors tabulated: closed-form moments of linear and power pieces.
TriTable conv_tt(const TriTable& va, const TriTable& vb, const TriGrid& grid) {
  const std::size_t m = grid.cells();
  const auto a = column_exponents(grid, vb);
  const auto b = row_exponents(grid, va);
  TriTable out(m);
  parallel_for(m, [&](std::size_t idx) {
    const std::size_t i = idx + 1;
    auto o = out.row(i);
    const auto ar = va.row(i);
    std::vector<double> lw(i, 0.0), rw(i, 0.0);
    for (std::size_t c = 1; c + 2 <= i; ++c) {
      lw[c] = grid.width(c) / 6.0 * (2.0 * ar[c] + ar[c + 1]);
      rw[c] = grid.width(c) / 6.0 * (ar[c] + 2.0 * ar[c + 1]);
    }
    if (i >= 3) accumulate_interior(lw, rw, i - 2, 0, vb, o);
    const double bi = b[i], hl = grid.width(i - 1);
    for (std::size_t j = 0; j + 2 <= i; ++j) {
      const double aj = a[j], hf = grid.width(j);
      const double first =
          hf * vb(j + 1, j) * (ar[j] * (1.0 / (aj + 1.0) - 1.0 / (aj + 2.0)) + ar[j + 1] / (aj + 2.0));
      const double last =
          hl * ar[i - 1] * (vb(i - 1, j) / (bi + 2.0) + vb(i, j) * (1.0 / (bi + 1.0) - 1.0 / (bi + 2.0)));
      o[j] += first + last;
    }
    const std::size_t j = i - 1;
    o[j] = hl * ar[i - 1] * vb(i, j) * std::beta(a[j] + 1.0, bi + 1.0);
  });
  return out;
}

void add_into(TriTable& acc, const TriTable& x) {
  auto d = acc.data();
  const auto s = x.data();
  for (std::size_t n = 0; n < d.size(); ++n) d[n] += s[n];
}

TriTable node_values(const Kernel& k, const TriGrid& grid) {
  TriTable out(grid.cells());
  for (std::size_t i = 1; i <= grid.cells(); ++i)
    for (std::size_t j = 0; j < i; ++j) out(i, j) = k(grid.node(i), grid.node(j));
  return out;
}

// sup_i int_0^{t_i} |V(t_i, s)| ds, trapezoidal with the power-law last cell.
double table_norm(const TriTable& v, const TriGrid& grid) {
  const auto b = row_exponents(grid, v);
  double sup = 0.0;
  for (std::size_t i = 1; i <= grid.cells(); ++i) {
    const auto r = v.row(i);
    double acc = 0.0;
    for (std::size_t c = 0; c + 2 <= i; ++c)
      acc += 0.5 * grid.width(c) * (std::abs(r[c]) + std::abs(r[c + 1]));
    acc += std::abs(r[i - 1]) * grid.width(i - 1) / (b[i] + 1.0);
    sup = std::max(sup, acc);
  }
  return sup;
}

double kernel_norm(const RowSamples& rs, const TriGrid& grid) {
  double sup = 0.0;
  for (std::size_t i = 1; i <= grid.cells(); ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < i; ++c) acc += std::abs(rs.left(i, c) + rs.right(i, c));
    sup = std::max(sup, acc);
  }
  return sup;
}

bool all_finite(const TriTable& v) {
  for (double x : v.data())
    if (!std::isfinite(x)) return false;
  return true;
}

void check_smallness(const RowSamples& rs, const TriGrid& grid, const Kernel& k) {
  double worst = 0.0;
  for (std::size_t i = 1; i <= grid.cells(); ++i)
    worst = std::max(worst, std::abs(rs.left(i, i - 1) + rs.right(i, i - 1)));
  if (!(worst < 1.0))
    throw DivergenceError("smallness check failed for kernel '" + k.name() +
                          "': one-cell integral reaches " + std::to_string(worst));
}

}  // namespace

KernelTable KernelTable::from_kernel(const Kernel& k, const TriGrid& grid) {
  require_regular_at_zero(k);
  return KernelTable{grid, k, TriTable()};
}

KernelTable KernelTable::from_values(const TriGrid& grid, TriTable values) {
  if (values.cells() != grid.cells()) throw std::invalid_argument("KernelTable: table does not match grid");
  return KernelTable{grid, std::nullopt, std::move(values)};
}

double KernelTable::at(std::size_t i, std::size_t j) const {
  double v = 0.0;
  if (kernel) v += (*kernel)(grid.node(i), grid.node(j));
  if (values.cells() != 0) v += values(i, j);
  return v;
}

TriTable KernelTable::tabulate() const {
  TriTable out(grid.cells());
  if (kernel) out = node_values(*kernel, grid);
  if (values.cells() != 0) add_into(out, values);
  return out;
}

KernelTable convolve(const KernelTable& a, const KernelTable& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("convolve: tables live on different grids");
  const TriGrid& grid = a.grid;
  if (a.kernel) require_regular_at_zero(*a.kernel);
  if (b.kernel) require_regular_at_zero(*b.kernel);
  TriTable out(grid.cells());
  const bool at = a.values.cells() != 0, bt = b.values.cells() != 0;
  std::optional<RowSamples> ra;
  std::optional<ColSamples> cb;
  if (a.kernel) ra.emplace(*a.kernel, grid);
  if (b.kernel) cb.emplace(*b.kernel, grid);
  if (a.kernel && b.kernel) add_into(out, conv_ee(*a.kernel, *ra, *b.kernel, *cb, grid));
  if (a.kernel && bt) add_into(out, conv_et(*a.kernel, *ra, b.values, grid));
  if (at && b.kernel) add_into(out, conv_te(a.values, *b.kernel, *cb, grid));
  if (at && bt) add_into(out, conv_tt(a.values, b.values, grid));
  return KernelTable::from_values(grid, std::move(out));
}

namespace {

// Runs the series; `visit(n, term)` sees every term and returns false to stop early.
template <class Visit>
void run_series(const Kernel& k, const TriGrid& grid, std::size_t max_terms, Visit visit) {
  require_regular_at_zero(k);
  const RowSamples rs(k, grid);
  check_smallness(rs, grid, k);
  if (!visit(1, node_values(k, grid), kernel_norm(rs, grid)) || max_terms < 2) return;
  const ColSamples cs(k, grid);
  TriTable term = conv_ee(k, rs, k, cs, grid);
  for (std::size_t n = 2;; ++n) {
    if (!all_finite(term)) throw DivergenceError("resolvent term " + std::to_string(n) + " is not finite");
    if (!visit(n, term, table_norm(term, grid)) || n >= max_terms) return;
    term = conv_et(k, rs, term, grid);
  }
}

}  // namespace

ResolventTable resolvent_sum(const Kernel& k, const TriGrid& grid, double tol, std::size_t max_terms) {
  if (!(tol > 0.0)) throw std::invalid_argument("resolvent_sum: tol must be positive");
  if (max_terms < 2) throw std::invalid_argument("resolvent_sum: max_terms must be at least 2");
  ResolventTable out{grid, k, TriTable(grid.cells()), 0, 0.0, {}, false};
  auto& norms = out.term_norms;
  auto decreasing = [&] {
    const std::size_t n = norms.size();
    return n >= 4 && norms[n - 1] < norms[n - 2] && norms[n - 2] < norms[n - 3] &&
           norms[n - 3] < norms[n - 4];
  };
  run_series(k, grid, max_terms, [&](std::size_t n, const TriTable& term, double norm) {
    add_into(out.values, term);
    norms.push_back(norm);
    out.terms_used = n;
    if (norm == 0.0) {
      out.converged = true;
      return false;
    }
    if (norm < tol && decreasing()) {
      out.converged = true;
      return false;
    }
    return true;
  });
  const std::size_t n = norms.size();
  if (!out.converged && !decreasing())
    throw DivergenceError("resolvent series not decaying after " + std::to_string(n) +
                          " terms (last term norm " + std::to_string(norms.back()) + ")");
  if (norms.back() > 0.0 && n >= 2) {
    const double ratio = norms[n - 1] / norms[n - 2];
    out.tail_norm = ratio < 1.0 ? norms.back() / (1.0 - ratio) : std::numeric_limits<double>::infinity();
  }
  return out;
}

std::vector<TriTable> resolvent_terms(const Kernel& k, const TriGrid& grid, std::size_t n) {
  std::vector<TriTable> out;
  if (n == 0) return out;
  run_series(k, grid, n, [&](std::size_t, const TriTable& term, double) {
    out.push_back(term);
    return true;
  });
  return out;
}

IdentityResiduals verify_resolvent_identity(const Kernel& k, const ResolventTable& r) {
  const TriGrid& grid = r.grid;
  require_regular_at_zero(k);
  const RowSamples rs(k, grid);
  const ColSamples cs(k, grid);
  const TriTable kv = node_values(k, grid);
  TriTable d = r.values;  // R - K
  {
    auto dd = d.data();
    const auto kk = kv.data();
    for (std::size_t n = 0; n < dd.size(); ++n) dd[n] -= kk[n];
  }
  const TriTable kk = conv_ee(k, rs, k, cs, grid);
  TriTable left = conv_et(k, rs, d, grid);
  TriTable right = conv_te(d, k, cs, grid);
  add_into(left, kk);
  add_into(right, kk);
  IdentityResiduals res;
  const auto dd = d.data();
  const auto l = left.data();
  const auto rr = right.data();
  for (std::size_t n = 0; n < dd.size(); ++n) {
    res.left = std::max(res.left, std::abs(dd[n] - l[n]));
    res.right = std::max(res.right, std::abs(dd[n] - rr[n]));
  }
  return res;
}

std::vector<double> gronwall_bound(const ResolventTable& r, const std::function<double(double)>& g) {
  const TriGrid& grid = r.grid;
  const std::size_t m = grid.cells();
  std::vector<double> gv(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    gv[i] = g(grid.node(i));
    if (!(gv[i] >= 0.0) || !std::isfinite(gv[i]))
      throw std::invalid_argument("gronwall_bound: g must be finite and nonnegative, got " +
                                  std::to_string(gv[i]) + " at t = " + std::to_string(grid.node(i)));
  }
  const RowSamples rs(r.kernel, grid);
  TriTable d = r.values;
  {
    const TriTable kv = node_values(r.kernel, grid);
    auto dd = d.data();
    const auto kk = kv.data();
    for (std::size_t n = 0; n < dd.size(); ++n) dd[n] -= kk[n];
  }
  const auto b = row_exponents(grid, d);
  std::vector<double> out(m + 1);
  out[0] = gv[0];
  for (std::size_t i = 1; i <= m; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < i; ++c) acc += rs.left(i, c) * gv[c] + rs.right(i, c) * gv[c + 1];
    const auto dr = d.row(i);
    for (std::size_t c = 0; c + 2 <= i; ++c)
      acc += 0.5 * grid.width(c) * (dr[c] * gv[c] + dr[c + 1] * gv[c + 1]);
    const double bi = b[i];
    acc += grid.width(i - 1) * dr[i - 1] *
           (gv[i - 1] / (bi + 2.0) + gv[i] * (1.0 / (bi + 1.0) - 1.0 / (bi + 2.0)));
    out[i] = gv[i] + acc;
  }
  return out;
}

}  // namespace vmv
