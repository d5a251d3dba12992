#include "qent/sdp.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace qent::sdp {
namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kStepFraction = 0.98;
constexpr int kStallWindow = 50;
constexpr int kKrylovDim = 20;
constexpr int kKrylovCycles = 2;
constexpr double kStallLevel = 1e-5;

// ---------------------------------------------------------------------------
// Coordinates: an orthonormal real basis of d x d Hermitian (or real symmetric)
// matrices under <X, Y> = Re tr(X Y). Diagonal entries first, then for each
// i < j the scaled real part and (complex layouts only) the scaled imaginary part.

struct Layout {
  int d = 0;
  bool real = false;

  int size() const { return real ? d * (d + 1) / 2 : d * d; }
  int pair_index(int i, int j) const { return i * d - i * (i + 1) / 2 + (j - i - 1); }
  int re_index(int i, int j) const { return d + (real ? pair_index(i, j) : 2 * pair_index(i, j)); }
  int im_index(int i, int j) const { return d + 2 * pair_index(i, j) + 1; }
};

enum class Kind { diag, re, im };

struct BasisEntry {
  int i;
  int j;
  Kind kind;
};

std::vector<BasisEntry> basis_of(const Layout& l) {
  std::vector<BasisEntry> out(static_cast<std::size_t>(l.size()));
  for (int i = 0; i < l.d; ++i) out[i] = {i, i, Kind::diag};
  for (int i = 0; i < l.d; ++i) {
    for (int j = i + 1; j < l.d; ++j) {
      out[l.re_index(i, j)] = {i, j, Kind::re};
      if (!l.real) out[l.im_index(i, j)] = {i, j, Kind::im};
    }
  }
  return out;
}

Eigen::VectorXd coords_of(const ComplexMatrix& m, const Layout& l) {
  Eigen::VectorXd v(l.size());
  for (int i = 0; i < l.d; ++i) v(i) = m(i, i).real();
  for (int i = 0; i < l.d; ++i) {
    for (int j = i + 1; j < l.d; ++j) {
      const Complex h = 0.5 * (m(i, j) + std::conj(m(j, i)));
      v(l.re_index(i, j)) = kSqrt2 * h.real();
      if (!l.real) v(l.im_index(i, j)) = kSqrt2 * h.imag();
    }
  }
  return v;
}

ComplexMatrix matrix_of(const Eigen::VectorXd& v, const Layout& l) {
  ComplexMatrix m(l.d, l.d);
  for (int i = 0; i < l.d; ++i) m(i, i) = v(i);
  for (int i = 0; i < l.d; ++i) {
    for (int j = i + 1; j < l.d; ++j) {
      const double re = v(l.re_index(i, j)) / kSqrt2;
      const double im = l.real ? 0.0 : v(l.im_index(i, j)) / kSqrt2;
      m(i, j) = Complex(re, im);
      m(j, i) = Complex(re, -im);
    }
  }
  return m;
}

// Image of (i, j) under a partial transpose of the index bits in `bits`.
std::pair<int, int> transpose_index(int i, int j, unsigned bits) {
  const unsigned ui = static_cast<unsigned>(i), uj = static_cast<unsigned>(j);
  return {static_cast<int>((ui & ~bits) | (uj & bits)), static_cast<int>((uj & ~bits) | (ui & bits))};
}

unsigned index_bits(int qubits, std::uint32_t subset) {
  unsigned bits = 0;
  for (int q = 0; q < qubits; ++q) {
    if ((subset >> q) & 1U) bits |= 1U << (qubits - 1 - q);
  }
  return bits;
}

// ---------------------------------------------------------------------------
// A term of a constraint group: a linear operator from variable coordinates to
// group rows, either a signed injection (one row per column) or a dense block.

struct TermOp {
  std::size_t var;
  bool dense = false;
  std::vector<int> row;     // per variable coordinate; -1 = no image
  std::vector<double> sign;
  Eigen::MatrixXd matrix;   // rows x var size
};

struct Group {
  int rows = 0;
  int offset = 0;
  std::vector<TermOp> terms;
  Eigen::VectorXd rhs;
};

TermOp signed_term(std::size_t var, const Layout& vl, const Layout& gl, const LinearMap& map) {
  TermOp op;
  op.var = var;
  op.row.assign(static_cast<std::size_t>(vl.size()), -1);
  op.sign.assign(static_cast<std::size_t>(vl.size()), 0.0);
  const unsigned bits =
      map.kind == LinearMap::Kind::partial_transpose ? index_bits(map.qubits, map.subset) : 0U;
  const auto basis = basis_of(vl);
  for (std::size_t c = 0; c < basis.size(); ++c) {
    const auto [i, j, kind] = basis[c];
    auto [a, b] = transpose_index(i, j, bits);
    double s = map.scale;
    if (kind == Kind::diag) {
      op.row[c] = a;
    } else if (kind == Kind::re) {
      op.row[c] = gl.re_index(std::min(a, b), std::max(a, b));
    } else {
      if (gl.real) throw std::logic_error("complex coordinate mapped into a real group");
      if (a > b) s = -s;
      op.row[c] = gl.im_index(std::min(a, b), std::max(a, b));
    }
    op.sign[c] = s;
  }
  return op;
}

// y_rows += S * x
void add_apply(const TermOp& op, const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> rows) {
  if (op.dense) {
    rows.noalias() += op.matrix * x;
    return;
  }
  for (std::size_t c = 0; c < op.row.size(); ++c) {
    if (op.row[c] >= 0) rows(op.row[c]) += op.sign[c] * x(static_cast<Eigen::Index>(c));
  }
}

// x += S^T * rows
void add_apply_transpose(const TermOp& op, const Eigen::Ref<const Eigen::VectorXd>& rows,
                         Eigen::VectorXd& x) {
  if (op.dense) {
    x.noalias() += op.matrix.transpose() * rows;
    return;
  }
  for (std::size_t c = 0; c < op.row.size(); ++c) {
    if (op.row[c] >= 0) x(static_cast<Eigen::Index>(c)) += op.sign[c] * rows(op.row[c]);
  }
}

// Returns S * A (A has var-size rows).
Eigen::MatrixXd left_apply(const TermOp& op, const Eigen::MatrixXd& a, int rows) {
  if (op.dense) return op.matrix * a;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, a.cols());
  for (std::size_t c = 0; c < op.row.size(); ++c) {
    if (op.row[c] >= 0) out.row(op.row[c]) += op.sign[c] * a.row(static_cast<Eigen::Index>(c));
  }
  return out;
}

// Returns A * S^T (A has var-size columns).
Eigen::MatrixXd right_apply_transpose(const Eigen::MatrixXd& a, const TermOp& op, int rows) {
  if (op.dense) return a * op.matrix.transpose();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows(), rows);
  for (std::size_t c = 0; c < op.row.size(); ++c) {
    if (op.row[c] >= 0) out.col(op.row[c]) += op.sign[c] * a.col(static_cast<Eigen::Index>(c));
  }
  return out;
}

// mat[og + rows of g, oh + rows of h] += S_g H S_h^T for two signed injections.
void add_congruence(Eigen::MatrixXd& mat, int og, int oh, const TermOp& g, const TermOp& h,
                    const Eigen::MatrixXd& hinv) {
  const std::size_t n = g.row.size();
  for (std::size_t c2 = 0; c2 < n; ++c2) {
    const int r2 = h.row[c2];
    if (r2 < 0) continue;
    const double s2 = h.sign[c2];
    double* col = mat.col(oh + r2).data() + og;
    const double* src = hinv.col(static_cast<Eigen::Index>(c2)).data();
    for (std::size_t c1 = 0; c1 < n; ++c1) {
      if (g.row[c1] >= 0) col[g.row[c1]] += g.sign[c1] * s2 * src[c1];
    }
  }
}

// ---------------------------------------------------------------------------
// Nesterov-Todd scaling of one cone: R^{-1} X R^{-dag} = diag(lambda) = R^dag Z R.

struct NtScaling {
  ComplexMatrix r;
  ComplexMatrix r_inv;
  Eigen::VectorXd lambda;
};

std::optional<NtScaling> nt_scaling(const ComplexMatrix& x, const ComplexMatrix& z) {
  Eigen::LLT<ComplexMatrix> lx(x), lz(z);
  if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return std::nullopt;
  const ComplexMatrix l1 = lx.matrixL();
  const ComplexMatrix l2 = lz.matrixL();
  Eigen::JacobiSVD<ComplexMatrix> svd(l2.adjoint() * l1, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd lambda = svd.singularValues();
  if (lambda.minCoeff() <= 0.0) return std::nullopt;
  const Eigen::VectorXd isq = lambda.cwiseSqrt().cwiseInverse();
  NtScaling s;
  s.lambda = lambda;
  s.r = l1 * svd.matrixV() * isq.asDiagonal();
  // R^{-1} = Lambda^{-1/2} U^dag L2^dag, since L2^dag L1 = U Lambda V^dag.
  s.r_inv = isq.asDiagonal() * svd.matrixU().adjoint() * l2.adjoint();
  return s;
}

// Largest alpha <= cap with diag(lambda) + alpha * delta PSD.
double max_step(const Eigen::VectorXd& lambda, const ComplexMatrix& delta) {
  const Eigen::VectorXd isq = lambda.cwiseSqrt().cwiseInverse();
  ComplexMatrix m = isq.asDiagonal() * delta * isq.asDiagonal();
  m = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  return lo >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lo;
}

// (A B + B A) / 2
ComplexMatrix jordan(const ComplexMatrix& a, const ComplexMatrix& b) { return 0.5 * (a * b + b * a); }

// Solves lambda o T = R for T.
ComplexMatrix lyapunov_diag(const Eigen::VectorXd& lambda, const ComplexMatrix& r) {
  ComplexMatrix t(r.rows(), r.cols());
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    for (Eigen::Index j = 0; j < r.cols(); ++j) t(i, j) = 2.0 * r(i, j) / (lambda(i) + lambda(j));
  }
  return t;
}

// ---------------------------------------------------------------------------

struct VarState {
  Layout layout;
  Bound bound;
  Eigen::VectorXd cost;
  Eigen::VectorXd x, z, u;  // z: dual of X >= 0; u: dual of I - X >= 0
  std::vector<std::size_t> groups;  // indices into terms (group, term)
  // per-iteration
  NtScaling lower, upper;
  ComplexMatrix hv;             // H^{-1}(G) = hv [(hv^dag G hv) o hd] hv^dag
  Eigen::MatrixXd hd;
  ComplexMatrix qf, uf;         // R2^{-1} R1 = uf diag(sigma) qf^dag (box only)
  Eigen::VectorXd sigma;
  Eigen::MatrixXd hinv;         // dense H^{-1} in coordinates
  int free_offset = -1;
};

bool coned(Bound b) { return b != Bound::free; }
bool has_upper(Bound b) { return b == Bound::box; }

Eigen::MatrixXd dense_hinv(const ComplexMatrix& v, const Eigen::MatrixXd& dmat, const Layout& l) {
  const int d = l.d;
  // K[(a,c),(b,d)] = H^{-1}(E_cd)_ab = sum_ij V_ai conj(V_ci) D_ij V_dj conj(V_bj)
  ComplexMatrix f(d * d, d);
  for (int a = 0; a < d; ++a) {
    for (int c = 0; c < d; ++c) {
      for (int i = 0; i < d; ++i) f(a * d + c, i) = v(a, i) * std::conj(v(c, i));
    }
  }
  const ComplexMatrix k = (f * dmat.cast<Complex>()) * f.adjoint();
  // Row r of the result holds the coordinates of H^{-1}(B_r), read off K block-wise.
  const auto basis = basis_of(l);
  const int n = l.size();
  const double s = 1.0 / kSqrt2;
  Eigen::MatrixXd h(n, n);
  ComplexMatrix p(d, d);
  for (int r = 0; r < n; ++r) {
    const auto [i, j, kind] = basis[r];
    if (kind == Kind::diag) {
      p = k.block(i * d, i * d, d, d);
    } else if (kind == Kind::re) {
      p = s * (k.block(i * d, j * d, d, d) + k.block(j * d, i * d, d, d));
    } else {
      p = Complex(0.0, -s) * k.block(i * d, j * d, d, d) + Complex(0.0, s) * k.block(j * d, i * d, d, d);
    }
    h.col(r) = coords_of(p.transpose(), l);
  }
  h = 0.5 * (h + h.transpose()).eval();
  return h;
}

void validate(const Problem& p) {
  const std::size_t nv = p.variables.size();
  if (p.objective.size() > nv) throw std::invalid_argument("sdp: more objective blocks than variables");
  for (std::size_t v = 0; v < nv; ++v) {
    if (p.variables[v].dim < 1) throw std::invalid_argument("sdp: variable dimension must be positive");
    if (p.variables[v].dim > 64) throw std::invalid_argument("sdp: variable dimension exceeds 64");
    if (v < p.objective.size() && p.objective[v].size() != 0) {
      const auto& c = p.objective[v];
      if (c.rows() != p.variables[v].dim || c.cols() != p.variables[v].dim) {
        throw std::invalid_argument("sdp: objective block size mismatch for " + p.variables[v].name);
      }
      if (!is_hermitian(c, 1e-12)) throw std::invalid_argument("sdp: objective block is not Hermitian");
    }
  }
  for (const auto& eq : p.matrix_equalities) {
    if (eq.terms.empty()) throw std::invalid_argument("sdp: matrix equality without terms");
    const int d = static_cast<int>(eq.rhs.rows());
    if (eq.rhs.cols() != d || !is_hermitian(eq.rhs, 1e-12)) {
      throw std::invalid_argument("sdp: matrix equality right-hand side must be square Hermitian");
    }
    for (const auto& t : eq.terms) {
      if (t.var >= nv) throw std::invalid_argument("sdp: term references unknown variable");
      if (p.variables[t.var].dim != d) throw std::invalid_argument("sdp: matrix equality dimension mismatch");
      if (std::abs(std::abs(t.map.scale) - 1.0) > 0.0) throw std::invalid_argument("sdp: map scale must be +/-1");
      if (t.map.kind == LinearMap::Kind::partial_transpose && (1 << t.map.qubits) != d) {
        throw std::invalid_argument("sdp: partial transpose qubit count does not match dimension");
      }
    }
  }
  for (const auto& eq : p.scalar_equalities) {
    for (const auto& t : eq.terms) {
      if (t.var >= nv) throw std::invalid_argument("sdp: term references unknown variable");
      if (t.coeff.rows() != p.variables[t.var].dim || t.coeff.cols() != p.variables[t.var].dim) {
        throw std::invalid_argument("sdp: scalar equality coefficient size mismatch");
      }
    }
  }
}

// Replaces X <= I variables by X = I - Y with Y >= 0. Returns the transformed
// problem and the constant added to the objective.
Problem lower_upper_bounds(const Problem& p, double& offset) {
  Problem q = p;
  offset = 0.0;
  q.objective.resize(p.variables.size());
  for (std::size_t v = 0; v < q.variables.size(); ++v) {
    if (q.variables[v].bound != Bound::upper) continue;
    q.variables[v].bound = Bound::psd;
    const int d = q.variables[v].dim;
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    if (q.objective[v].size() != 0) {
      offset += q.objective[v].trace().real();
      q.objective[v] = -q.objective[v];
    }
    for (auto& eq : q.matrix_equalities) {
      for (auto& t : eq.terms) {
        if (t.var != v) continue;
        eq.rhs -= sdp::apply(t.map, id);
        t.map.scale = -t.map.scale;
      }
    }
    for (auto& eq : q.scalar_equalities) {
      for (auto& t : eq.terms) {
        if (t.var != v) continue;
        eq.rhs -= (t.coeff.adjoint() * id).trace().real();
        t.coeff = -t.coeff;
      }
    }
  }
  return q;
}

class Solver {
 public:
  Solver(const Problem& p, const Options& o) : opt_(o) {
    validate(p);
    orig_ = &p;
    prob_ = lower_upper_bounds(p, obj_offset_);
    build();
  }

  Solution run();

 private:
  void build();
  void residuals();
  bool factor();
  struct Direction {
    std::vector<Eigen::VectorXd> dx, dz, du;
    Eigen::VectorXd dxf, dy;
    std::vector<ComplexMatrix> sx, sz, ss, su;  // scaled cone directions
  };
  Direction newton(const std::vector<ComplexMatrix>& t_lower, const std::vector<ComplexMatrix>& t_upper);
  std::pair<double, double> step_lengths(const Direction& dir) const;
  double primal_objective() const;
  double dual_objective() const;
  double mu() const;

  Options opt_;
  const Problem* orig_;
  Problem prob_;
  double obj_offset_ = 0.0;

  std::vector<VarState> vars_;
  std::vector<Group> groups_;
  int m_ = 0;
  int nfree_ = 0;
  double nu_ = 0.0;
  double bnorm_ = 0.0, cnorm_ = 0.0;

  Eigen::VectorXd y_;
  Eigen::VectorXd rp_;
  std::vector<Eigen::VectorXd> rd_;

  // Schur complement per connected component of groups.
  struct Component {
    std::vector<int> groups;
    std::vector<int> rows;  // global row indices
    Eigen::LLT<Eigen::MatrixXd> llt;
    Eigen::MatrixXd af;       // free-variable columns of A restricted to this component
    Eigen::SparseMatrix<double> af_sparse;
    Eigen::MatrixXd minv_af;
    bool touches_free = false;
  };
  std::vector<Component> comps_;
  std::vector<int> row_comp_, row_local_;
  Eigen::LDLT<Eigen::MatrixXd> free_ldlt_;
};

void Solver::build() {
  const auto& p = prob_;
  vars_.resize(p.variables.size());
  for (std::size_t v = 0; v < vars_.size(); ++v) {
    auto& vs = vars_[v];
    vs.layout = {p.variables[v].dim, p.variables[v].real};
    vs.bound = p.variables[v].bound;
    const int n = vs.layout.size();
    vs.cost = (v < p.objective.size() && p.objective[v].size() != 0) ? coords_of(p.objective[v], vs.layout)
                                                                      : Eigen::VectorXd::Zero(n);
    const int d = vs.layout.d;
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    const double cscale = 1.0 + vs.cost.cwiseAbs().maxCoeff();
    switch (vs.bound) {
      case Bound::free:
        vs.x = Eigen::VectorXd::Zero(n);
        vs.free_offset = nfree_;
        nfree_ += n;
        break;
      case Bound::psd:
        vs.x = coords_of(id, vs.layout);
        vs.z = coords_of(cscale * id, vs.layout);
        nu_ += d;
        break;
      case Bound::box:
        vs.x = coords_of(0.5 * id, vs.layout);
        vs.z = coords_of(cscale * id, vs.layout);
        vs.u = coords_of(cscale * id, vs.layout);
        nu_ += 2 * d;
        break;
      case Bound::upper:
        throw std::logic_error("upper bounds are rewritten before solving");
    }
  }

  for (const auto& eq : p.matrix_equalities) {
    Group g;
    bool real = is_hermitian(eq.rhs) && eq.rhs.imag().cwiseAbs().maxCoeff() == 0.0;
    for (const auto& t : eq.terms) real = real && p.variables[t.var].real;
    const Layout gl{static_cast<int>(eq.rhs.rows()), real};
    g.rows = gl.size();
    g.rhs = coords_of(eq.rhs, gl);
    for (const auto& t : eq.terms) g.terms.push_back(signed_term(t.var, vars_[t.var].layout, gl, t.map));
    groups_.push_back(std::move(g));
  }
  for (const auto& eq : p.scalar_equalities) {
    Group g;
    g.rows = 1;
    g.rhs = Eigen::VectorXd::Constant(1, eq.rhs);
    for (const auto& t : eq.terms) {
      TermOp op;
      op.var = t.var;
      op.dense = true;
      const ComplexMatrix herm = 0.5 * (t.coeff + t.coeff.adjoint());
      op.matrix = coords_of(herm, vars_[t.var].layout).transpose();
      g.terms.push_back(std::move(op));
    }
    groups_.push_back(std::move(g));
  }
  // Merge repeated terms of the same variable inside one group into a dense block.
  for (auto& g : groups_) {
    std::vector<TermOp> merged;
    for (auto& t : g.terms) {
      auto it = std::find_if(merged.begin(), merged.end(), [&](const TermOp& o) { return o.var == t.var; });
      if (it == merged.end()) {
        merged.push_back(std::move(t));
        continue;
      }
      const int n = vars_[t.var].layout.size();
      Eigen::MatrixXd a = left_apply(*it, Eigen::MatrixXd::Identity(n, n), g.rows);
      a += left_apply(t, Eigen::MatrixXd::Identity(n, n), g.rows);
      it->dense = true;
      it->matrix = std::move(a);
      it->row.clear();
      it->sign.clear();
    }
    g.terms = std::move(merged);
  }

  for (auto& g : groups_) {
    g.offset = m_;
    m_ += g.rows;
  }
  for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
    for (std::size_t ti = 0; ti < groups_[gi].terms.size(); ++ti) {
      vars_[groups_[gi].terms[ti].var].groups.push_back(gi);
    }
  }
  for (std::size_t v = 0; v < vars_.size(); ++v) {
    if (vars_[v].bound == Bound::free && vars_[v].groups.empty()) {
      throw std::invalid_argument("sdp: free variable " + prob_.variables[v].name +
                                  " appears in no equality");
    }
  }

  // Components: groups linked through shared coned variables.
  std::vector<int> parent(groups_.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& vs : vars_) {
    if (!coned(vs.bound)) continue;
    for (std::size_t k = 1; k < vs.groups.size(); ++k) {
      parent[find(static_cast<int>(vs.groups[k]))] = find(static_cast<int>(vs.groups[0]));
    }
  }
  std::vector<int> comp_of(groups_.size(), -1);
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const int root = find(static_cast<int>(g));
    if (comp_of[root] < 0) {
      comp_of[root] = static_cast<int>(comps_.size());
      comps_.emplace_back();
    }
    comps_[comp_of[root]].groups.push_back(static_cast<int>(g));
  }
  row_comp_.assign(m_, -1);
  row_local_.assign(m_, -1);
  for (std::size_t c = 0; c < comps_.size(); ++c) {
    for (int g : comps_[c].groups) {
      for (int r = 0; r < groups_[g].rows; ++r) {
        row_comp_[groups_[g].offset + r] = static_cast<int>(c);
        row_local_[groups_[g].offset + r] = static_cast<int>(comps_[c].rows.size());
        comps_[c].rows.push_back(groups_[g].offset + r);
      }
    }
  }

  if (nfree_ > 0) {
    Eigen::MatrixXd af = Eigen::MatrixXd::Zero(m_, nfree_);
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      const auto& vs = vars_[v];
      if (coned(vs.bound)) continue;
      const int n = vs.layout.size();
      for (std::size_t gi : vs.groups) {
        const auto& g = groups_[gi];
        for (const auto& t : g.terms) {
          if (t.var != v) continue;
          af.block(g.offset, vs.free_offset, g.rows, n) += left_apply(t, Eigen::MatrixXd::Identity(n, n), g.rows);
        }
      }
    }
    for (auto& comp : comps_) {
      comp.af.resize(static_cast<Eigen::Index>(comp.rows.size()), nfree_);
      for (std::size_t r = 0; r < comp.rows.size(); ++r) comp.af.row(static_cast<Eigen::Index>(r)) = af.row(comp.rows[r]);
      comp.touches_free = comp.af.cwiseAbs().maxCoeff() > 0.0;
      comp.af_sparse = comp.af.sparseView();
    }
  }

  bnorm_ = 0.0;
  for (const auto& g : groups_) bnorm_ += g.rhs.squaredNorm();
  bnorm_ = std::sqrt(bnorm_);
  cnorm_ = 0.0;
  for (const auto& vs : vars_) cnorm_ += vs.cost.squaredNorm();
  cnorm_ = std::sqrt(cnorm_);
  y_ = Eigen::VectorXd::Zero(m_);
}

void Solver::residuals() {
  rp_ = Eigen::VectorXd::Zero(m_);
  for (const auto& g : groups_) {
    auto seg = rp_.segment(g.offset, g.rows);
    seg = g.rhs;
    Eigen::VectorXd ax = Eigen::VectorXd::Zero(g.rows);
    for (const auto& t : g.terms) add_apply(t, vars_[t.var].x, ax);
    seg -= ax;
  }
  rd_.resize(vars_.size());
  for (std::size_t v = 0; v < vars_.size(); ++v) {
    const auto& vs = vars_[v];
    Eigen::VectorXd aty = Eigen::VectorXd::Zero(vs.layout.size());
    for (std::size_t gi : vs.groups) {
      const auto& g = groups_[gi];
      for (const auto& t : g.terms) {
        if (t.var == v) add_apply_transpose(t, y_.segment(g.offset, g.rows), aty);
      }
    }
    rd_[v] = vs.cost - aty;
    if (coned(vs.bound)) rd_[v] -= vs.z;
    if (has_upper(vs.bound)) rd_[v] += vs.u;
  }
}

double Solver::primal_objective() const {
  double acc = obj_offset_;
  for (const auto& vs : vars_) acc += vs.cost.dot(vs.x);
  return acc;
}

double Solver::dual_objective() const {
  double acc = obj_offset_;
  for (const auto& g : groups_) acc += g.rhs.dot(y_.segment(g.offset, g.rows));
  for (const auto& vs : vars_) {
    if (has_upper(vs.bound)) acc -= matrix_of(vs.u, vs.layout).trace().real();
  }
  return acc;
}

double Solver::mu() const {
  if (nu_ == 0.0) return 0.0;
  double acc = 0.0;
  for (const auto& vs : vars_) {
    if (!coned(vs.bound)) continue;
    acc += vs.x.dot(vs.z);
    if (has_upper(vs.bound)) {
      const ComplexMatrix id = ComplexMatrix::Identity(vs.layout.d, vs.layout.d);
      acc += (coords_of(id, vs.layout) - vs.x).dot(vs.u);
    }
  }
  return acc / nu_;
}

bool Solver::factor() {
  // Scalings and dense H^{-1} per coned variable.
  for (auto& vs : vars_) {
    if (!coned(vs.bound)) continue;
    const int d = vs.layout.d;
    const ComplexMatrix x = matrix_of(vs.x, vs.layout);
    auto lo = nt_scaling(x, matrix_of(vs.z, vs.layout));
    if (!lo) return false;
    vs.lower = std::move(*lo);
    if (has_upper(vs.bound)) {
      const ComplexMatrix s = ComplexMatrix::Identity(d, d) - x;
      auto up = nt_scaling(s, matrix_of(vs.u, vs.layout));
      if (!up) return false;
      vs.upper = std::move(*up);
      // H = W1^{-1} (.) W1^{-1} + W2^{-1} (.) W2^{-1}; simultaneous congruence via SVD of R2^{-1} R1.
      Eigen::JacobiSVD<ComplexMatrix> svd(vs.upper.r_inv * vs.lower.r, Eigen::ComputeFullU | Eigen::ComputeFullV);
      vs.sigma = svd.singularValues();
      vs.qf = svd.matrixV();
      vs.uf = svd.matrixU();
      const Eigen::VectorXd beta = vs.sigma.cwiseAbs2();
      vs.hv = vs.lower.r * vs.qf;
      vs.hd.resize(d, d);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) vs.hd(i, j) = 1.0 / (1.0 + beta(i) * beta(j));
      }
    } else {
      vs.hv = vs.lower.r;
      vs.hd = Eigen::MatrixXd::Ones(d, d);
      vs.qf = ComplexMatrix::Identity(d, d);
    }
    vs.hinv = dense_hinv(vs.hv, vs.hd, vs.layout);
  }

  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(nfree_, nfree_);
  for (auto& comp : comps_) {
    const int mc = static_cast<int>(comp.rows.size());
    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(mc, mc);
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      const auto& vs = vars_[v];
      if (!coned(vs.bound)) continue;
      // Terms of v that live in this component.
      std::vector<std::pair<const Group*, const TermOp*>> terms;
      for (std::size_t gi : vs.groups) {
        if (row_comp_.empty() || row_comp_[groups_[gi].offset] != &comp - comps_.data()) continue;
        for (const auto& t : groups_[gi].terms) {
          if (t.var == v) terms.emplace_back(&groups_[gi], &t);
        }
      }
      for (const auto& [gh, th] : terms) {
        const int oh = row_local_[gh->offset];
        if (!th->dense) {
          for (const auto& [gg, tg] : terms) {
            if (tg->dense) continue;
            add_congruence(mat, row_local_[gg->offset], oh, *tg, *th, vs.hinv);
          }
        }
        Eigen::MatrixXd right;
        for (const auto& [gg, tg] : terms) {
          if (!th->dense && !tg->dense) continue;
          if (right.size() == 0) right = right_apply_transpose(vs.hinv, *th, gh->rows);
          mat.block(row_local_[gg->offset], oh, gg->rows, gh->rows) += left_apply(*tg, right, gg->rows);
        }
      }
    }
    const double reg = 1e-14 * std::max(1.0, mat.diagonal().cwiseAbs().maxCoeff());
    mat.diagonal().array() += reg;
    comp.llt.compute(mat);
    if (comp.llt.info() != Eigen::Success) return false;
    if (comp.touches_free) {
      comp.minv_af = comp.llt.solve(comp.af);
      f.noalias() += comp.af_sparse.transpose() * comp.minv_af;
    }
  }
  if (nfree_ > 0) {
    f.diagonal().array() += 1e-14 * std::max(1.0, f.diagonal().cwiseAbs().maxCoeff());
    free_ldlt_.compute(f);
    if (free_ldlt_.info() != Eigen::Success) return false;
  }
  return true;
}

Solver::Direction Solver::newton(const std::vector<ComplexMatrix>& t_lower,
                                 const std::vector<ComplexMatrix>& t_upper) {
  Direction dir;
  const std::size_t nv = vars_.size();
  // Complementarity targets expressed in the congruence frame of H (Vh^dag . Vh).
  std::vector<ComplexMatrix> gbar(nv);
  std::vector<Eigen::VectorXd> hg(nv);
  auto in_frame = [](const VarState& vs, const ComplexMatrix& g) -> ComplexMatrix {
    return vs.hv.adjoint() * g * vs.hv;
  };
  auto from_frame = [](const VarState& vs, const ComplexMatrix& ybar) -> ComplexMatrix {
    return vs.hv * ybar * vs.hv.adjoint();
  };
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& vs = vars_[v];
    if (!coned(vs.bound)) continue;
    ComplexMatrix g = vs.qf.adjoint() * t_lower[v] * vs.qf;
    if (has_upper(vs.bound)) {
      g -= vs.sigma.asDiagonal() * (vs.uf.adjoint() * t_upper[v] * vs.uf) * vs.sigma.asDiagonal();
    }
    gbar[v] = g - in_frame(vs, matrix_of(rd_[v], vs.layout));
    const ComplexMatrix y = gbar[v].cwiseProduct(vs.hd.cast<Complex>());
    hg[v] = coords_of(from_frame(vs, y), vs.layout);
  }

  Eigen::VectorXd rhs1 = rp_;
  for (const auto& g : groups_) {
    for (const auto& t : g.terms) {
      if (!coned(vars_[t.var].bound)) continue;
      Eigen::VectorXd tmp = Eigen::VectorXd::Zero(g.rows);
      add_apply(t, hg[t.var], tmp);
      rhs1.segment(g.offset, g.rows) -= tmp;
    }
  }

  auto a_transpose = [&](std::size_t v, const Eigen::VectorXd& y) {
    const auto& vs = vars_[v];
    Eigen::VectorXd at = Eigen::VectorXd::Zero(vs.layout.size());
    for (std::size_t gi : vs.groups) {
      const auto& g = groups_[gi];
      for (const auto& term : g.terms) {
        if (term.var == v) add_apply_transpose(term, y.segment(g.offset, g.rows), at);
      }
    }
    return at;
  };

  // Solves M dy + A_f dxf = r1, A_f^T dy = r2 with the factored blocks.
  auto reduced_solve = [&](const Eigen::VectorXd& r1, const Eigen::VectorXd& r2, Eigen::VectorXd& dy,
                           Eigen::VectorXd& dxf) {
    dy.setZero(m_);
    for (const auto& comp : comps_) {
      Eigen::VectorXd local(comp.rows.size());
      for (std::size_t r = 0; r < comp.rows.size(); ++r) local(r) = r1(comp.rows[r]);
      local = comp.llt.solve(local);
      for (std::size_t r = 0; r < comp.rows.size(); ++r) dy(comp.rows[r]) = local(r);
    }
    if (nfree_ == 0) return;
    Eigen::VectorXd rhs(nfree_);
    for (std::size_t v = 0; v < nv; ++v) {
      const auto& vs = vars_[v];
      if (coned(vs.bound)) continue;
      rhs.segment(vs.free_offset, vs.layout.size()) = a_transpose(v, dy) - r2.segment(vs.free_offset, vs.layout.size());
    }
    dxf = free_ldlt_.solve(rhs);
    for (const auto& comp : comps_) {
      if (!comp.touches_free) continue;
      const Eigen::VectorXd corr = comp.minv_af * dxf;
      for (std::size_t r = 0; r < comp.rows.size(); ++r) dy(comp.rows[r]) -= corr(r);
    }
  };

  Eigen::VectorXd rdf = Eigen::VectorXd::Zero(nfree_);
  for (std::size_t v = 0; v < nv; ++v) {
    if (!coned(vars_[v].bound)) rdf.segment(vars_[v].free_offset, vars_[v].layout.size()) = rd_[v];
  }
  // The factored blocks lose accuracy as mu -> 0; GMRES on the unfactored operator,
  // preconditioned by them, recovers it.
  const int nu = m_ + nfree_;
  auto split = [&](const Eigen::VectorXd& u, Eigen::VectorXd& dy, Eigen::VectorXd& dxf) {
    dy = u.head(m_);
    dxf = u.tail(nfree_);
  };
  auto join = [&](const Eigen::VectorXd& dy, const Eigen::VectorXd& dxf) {
    Eigen::VectorXd u(nu);
    u.head(m_) = dy;
    if (nfree_ > 0) u.tail(nfree_) = dxf;
    return u;
  };
  auto apply_k = [&](const Eigen::VectorXd& u) {
    Eigen::VectorXd dy, dxf;
    split(u, dy, dxf);
    Eigen::VectorXd k1 = Eigen::VectorXd::Zero(m_);
    for (const auto& g : groups_) {
      Eigen::VectorXd ax = Eigen::VectorXd::Zero(g.rows);
      for (const auto& term : g.terms) {
        const auto& vs = vars_[term.var];
        if (coned(vs.bound)) {
          const ComplexMatrix ybar =
              in_frame(vs, matrix_of(a_transpose(term.var, dy), vs.layout)).cwiseProduct(vs.hd.cast<Complex>());
          add_apply(term, coords_of(from_frame(vs, ybar), vs.layout), ax);
        } else {
          add_apply(term, dxf.segment(vs.free_offset, vs.layout.size()), ax);
        }
      }
      k1.segment(g.offset, g.rows) = ax;
    }
    Eigen::VectorXd k2(nfree_);
    for (std::size_t v = 0; v < nv; ++v) {
      if (!coned(vars_[v].bound)) k2.segment(vars_[v].free_offset, vars_[v].layout.size()) = a_transpose(v, dy);
    }
    return join(k1, k2);
  };
  auto precondition = [&](const Eigen::VectorXd& r) {
    Eigen::VectorXd r1, r2, dy, dxf;
    split(r, r1, r2);
    reduced_solve(r1, r2, dy, dxf);
    return join(dy, dxf);
  };

  const Eigen::VectorXd b = join(rhs1, rdf);
  Eigen::VectorXd sol = precondition(b);
  const double target = 1e-14 * (1.0 + b.norm());
  for (int cycle = 0; cycle < kKrylovCycles; ++cycle) {
    const Eigen::VectorXd r0 = b - apply_k(sol);
    const double beta = r0.norm();
    if (!(beta > target)) break;
    Eigen::MatrixXd v(nu, kKrylovDim + 1), z(nu, kKrylovDim);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(kKrylovDim + 1, kKrylovDim);
    v.col(0) = r0 / beta;
    Eigen::VectorXd e = Eigen::VectorXd::Zero(kKrylovDim + 1);
    e(0) = beta;
    int k = 0;
    double res = beta;
    while (k < kKrylovDim && res > target) {
      z.col(k) = precondition(v.col(k));
      Eigen::VectorXd w = apply_k(z.col(k));
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= k; ++i) {
          const double c = v.col(i).dot(w);
          h(i, k) += c;
          w -= c * v.col(i);
        }
      }
      h(k + 1, k) = w.norm();
      ++k;
      const Eigen::VectorXd coef = h.topLeftCorner(k + 1, k).colPivHouseholderQr().solve(e.head(k + 1));
      res = (e.head(k + 1) - h.topLeftCorner(k + 1, k) * coef).norm();
      if (h(k, k - 1) <= 1e-300) break;
      v.col(k) = w / h(k, k - 1);
    }
    if (k == 0) break;
    const Eigen::VectorXd coef = h.topLeftCorner(k + 1, k).colPivHouseholderQr().solve(e.head(k + 1));
    sol += z.leftCols(k) * coef;
  }
  split(sol, dir.dy, dir.dxf);

  dir.dx.resize(nv);
  dir.dz.resize(nv);
  dir.du.resize(nv);
  dir.sx.resize(nv);
  dir.sz.resize(nv);
  dir.ss.resize(nv);
  dir.su.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& vs = vars_[v];
    if (!coned(vs.bound)) {
      dir.dx[v] = dir.dxf.segment(vs.free_offset, vs.layout.size());
      continue;
    }
    const Eigen::VectorXd aty = a_transpose(v, dir.dy);
    const ComplexMatrix ybar =
        (gbar[v] + in_frame(vs, matrix_of(aty, vs.layout))).cwiseProduct(vs.hd.cast<Complex>());
    dir.dx[v] = coords_of(from_frame(vs, ybar), vs.layout);
    // The dual equation fixes dZ - dU; dZ is exact for plain cones.
    const Eigen::VectorXd q = rd_[v] - aty;
    dir.sx[v] = vs.qf * ybar * vs.qf.adjoint();
    if (!has_upper(vs.bound)) {
      dir.dz[v] = q;
      dir.sz[v] = vs.lower.r.adjoint() * matrix_of(q, vs.layout) * vs.lower.r;
      continue;
    }
    dir.ss[v] = -(vs.uf * (vs.sigma.asDiagonal() * ybar * vs.sigma.asDiagonal()) * vs.uf.adjoint());
    if (vs.lower.lambda.minCoeff() >= vs.upper.lambda.minCoeff()) {
      dir.sz[v] = t_lower[v] - dir.sx[v];
      const ComplexMatrix dz = vs.lower.r_inv.adjoint() * dir.sz[v] * vs.lower.r_inv;
      dir.dz[v] = coords_of(dz, vs.layout);
      dir.du[v] = dir.dz[v] - q;
      dir.su[v] = vs.upper.r.adjoint() * matrix_of(dir.du[v], vs.layout) * vs.upper.r;
    } else {
      dir.su[v] = t_upper[v] - dir.ss[v];
      const ComplexMatrix du = vs.upper.r_inv.adjoint() * dir.su[v] * vs.upper.r_inv;
      dir.du[v] = coords_of(du, vs.layout);
      dir.dz[v] = q + dir.du[v];
      dir.sz[v] = vs.lower.r.adjoint() * matrix_of(dir.dz[v], vs.layout) * vs.lower.r;
    }
  }
  return dir;
}

std::pair<double, double> Solver::step_lengths(const Direction& dir) const {
  double ap = std::numeric_limits<double>::infinity();
  double ad = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < vars_.size(); ++v) {
    const auto& vs = vars_[v];
    if (!coned(vs.bound)) continue;
    ap = std::min(ap, max_step(vs.lower.lambda, dir.sx[v]));
    ad = std::min(ad, max_step(vs.lower.lambda, dir.sz[v]));
    if (has_upper(vs.bound)) {
      ap = std::min(ap, max_step(vs.upper.lambda, dir.ss[v]));
      ad = std::min(ad, max_step(vs.upper.lambda, dir.su[v]));
    }
  }
  return {ap, ad};
}

Solution Solver::run() {
  Solution sol;
  const std::size_t nv = vars_.size();
  double best_infeas = std::numeric_limits<double>::infinity();
  int stalled = 0;

  for (int it = 0;; ++it) {
    residuals();
    const double pobj = primal_objective();
    const double dobj = dual_objective();
    const double pinf = rp_.norm() / (1.0 + bnorm_);
    double rdn = 0.0;
    for (const auto& r : rd_) rdn += r.squaredNorm();
    const double dinf = std::sqrt(rdn) / (1.0 + cnorm_);
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double mu_now = mu();

    sol.objective_value = pobj;
    sol.dual_value = dobj;
    sol.primal_residual = pinf;
    sol.dual_residual = dinf;
    sol.gap = gap;
    sol.iterations = it;

    if (pinf < opt_.tol && dinf < opt_.tol && gap < opt_.tol) {
      sol.status = Status::optimal;
      break;
    }
    const double infeas = std::max(pinf, dinf);
    if (infeas < 0.5 * best_infeas) {
      best_infeas = infeas;
      stalled = 0;
    } else if (infeas > kStallLevel && ++stalled >= kStallWindow) {
      sol.status = Status::infeasible;
      break;
    }
    if (it >= opt_.max_iter) {
      sol.status = Status::max_iterations;
      break;
    }
    if (!factor()) {
      sol.status = infeas > kStallLevel ? Status::infeasible : Status::max_iterations;
      break;
    }

    // Predictor.
    std::vector<ComplexMatrix> tl(nv), tu(nv);
    for (std::size_t v = 0; v < nv; ++v) {
      const auto& vs = vars_[v];
      if (!coned(vs.bound)) continue;
      tl[v] = -ComplexMatrix(vs.lower.lambda.cast<Complex>().asDiagonal());
      if (has_upper(vs.bound)) tu[v] = -ComplexMatrix(vs.upper.lambda.cast<Complex>().asDiagonal());
    }
    const Direction aff = newton(tl, tu);
    auto [apa, ada] = step_lengths(aff);
    apa = std::min(1.0, apa);
    ada = std::min(1.0, ada);

    double mu_aff = 0.0;
    for (std::size_t v = 0; v < nv; ++v) {
      const auto& vs = vars_[v];
      if (!coned(vs.bound)) continue;
      auto inner = [&](const Eigen::VectorXd& lam, const ComplexMatrix& sx, const ComplexMatrix& sz) {
        const ComplexMatrix l = lam.cast<Complex>().asDiagonal();
        return ((l + apa * sx) * (l + ada * sz)).trace().real();
      };
      mu_aff += inner(vs.lower.lambda, aff.sx[v], aff.sz[v]);
      if (has_upper(vs.bound)) mu_aff += inner(vs.upper.lambda, aff.ss[v], aff.su[v]);
    }
    mu_aff /= nu_;
    const double sigma = std::clamp(std::pow(mu_aff / mu_now, 3.0), 0.0, 1.0);

    // Corrector.
    for (std::size_t v = 0; v < nv; ++v) {
      const auto& vs = vars_[v];
      if (!coned(vs.bound)) continue;
      auto rhs = [&](const Eigen::VectorXd& lam, const ComplexMatrix& sx, const ComplexMatrix& sz) {
        const Eigen::Index d = lam.size();
        ComplexMatrix r = sigma * mu_now * ComplexMatrix::Identity(d, d);
        r.diagonal() -= lam.cwiseAbs2().cast<Complex>();
        r -= jordan(sx, sz);
        return lyapunov_diag(lam, r);
      };
      tl[v] = rhs(vs.lower.lambda, aff.sx[v], aff.sz[v]);
      if (has_upper(vs.bound)) tu[v] = rhs(vs.upper.lambda, aff.ss[v], aff.su[v]);
    }
    const Direction dir = newton(tl, tu);
    auto [ap, ad] = step_lengths(dir);
    ap = std::min(1.0, kStepFraction * ap);
    ad = std::min(1.0, kStepFraction * ad);

    for (std::size_t v = 0; v < nv; ++v) {
      auto& vs = vars_[v];
      vs.x += ap * dir.dx[v];
      if (!coned(vs.bound)) continue;
      vs.z += ad * dir.dz[v];
      if (has_upper(vs.bound)) vs.u += ad * dir.du[v];
    }
    y_ += ad * dir.dy;

    sol.history.push_back({it, pobj, dobj, mu_now, pinf, dinf, ap, ad});
    if (opt_.verbose) {
      std::fprintf(stderr, "%3d  pobj % .9e  dobj % .9e  mu %.2e  pinf %.2e  dinf %.2e  ap %.3f  ad %.3f\n", it,
                   pobj, dobj, mu_now, pinf, dinf, ap, ad);
    }
  }

  // Map back to the caller's variables.
  sol.values.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    ComplexMatrix x = matrix_of(vars_[v].x, vars_[v].layout);
    if (orig_->variables[v].bound == Bound::upper) {
      x = ComplexMatrix::Identity(x.rows(), x.cols()) - x;
    }
    sol.values[v] = std::move(x);
  }
  return sol;
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::max_iterations: return "max-iterations";
  }
  return "unknown";
}

ComplexMatrix apply(const LinearMap& map, const ComplexMatrix& x) {
  if (map.kind == LinearMap::Kind::identity) return map.scale * x;
  const unsigned bits = index_bits(map.qubits, map.subset);
  ComplexMatrix out(x.rows(), x.cols());
  for (int a = 0; a < x.rows(); ++a) {
    for (int b = 0; b < x.cols(); ++b) {
      const auto [a2, b2] = transpose_index(a, b, bits);
      out(a, b) = map.scale * x(a2, b2);
    }
  }
  return out;
}

std::size_t Problem::add_variable(std::string name, int dim, Bound bound, bool real) {
  variables.push_back({std::move(name), dim, bound, real});
  objective.resize(variables.size());
  return variables.size() - 1;
}

Solution solve(const Problem& problem, const Options& options) {
  Solver solver(problem, options);
  return solver.run();
}

Certificate certify(const Problem& p, const std::vector<ComplexMatrix>& values) {
  if (values.size() != p.variables.size()) throw std::invalid_argument("certify: wrong number of values");
  Certificate cert;
  for (std::size_t v = 0; v < values.size(); ++v) {
    const ComplexMatrix herm = 0.5 * (values[v] + values[v].adjoint());
    cert.bound_violation = std::max(cert.bound_violation, (values[v] - values[v].adjoint()).cwiseAbs().maxCoeff());
    const Bound b = p.variables[v].bound;
    if (b == Bound::free) continue;
    const HermitianEig eig = herm_eig(herm);
    if (b == Bound::psd || b == Bound::box) {
      cert.bound_violation = std::max(cert.bound_violation, -eig.eigenvalues(0));
    }
    if (b == Bound::box || b == Bound::upper) {
      cert.bound_violation = std::max(cert.bound_violation, eig.eigenvalues(eig.eigenvalues.size() - 1) - 1.0);
    }
  }
  for (const auto& eq : p.matrix_equalities) {
    ComplexMatrix r = -eq.rhs;
    for (const auto& t : eq.terms) r += sdp::apply(t.map, values[t.var]);
    cert.equality_residual = std::max(cert.equality_residual, r.cwiseAbs().maxCoeff());
  }
  for (const auto& eq : p.scalar_equalities) {
    double acc = -eq.rhs;
    for (const auto& t : eq.terms) acc += (t.coeff.adjoint() * values[t.var]).trace().real();
    cert.equality_residual = std::max(cert.equality_residual, std::abs(acc));
  }
  return cert;
}

namespace {
ComplexMatrix embed(const ComplexMatrix& m) {
  const Eigen::Index d = m.rows();
  ComplexMatrix out = ComplexMatrix::Zero(2 * d, 2 * d);
  out.block(0, 0, d, d) = m.real().cast<Complex>();
  out.block(d, d, d, d) = m.real().cast<Complex>();
  out.block(0, d, d, d) = -m.imag().cast<Complex>();
  out.block(d, 0, d, d) = m.imag().cast<Complex>();
  return out;
}
}  // namespace

Problem real_embedding(const Problem& p) {
  Problem q;
  for (const auto& v : p.variables) q.variables.push_back({v.name, 2 * v.dim, v.bound, true});
  q.objective.resize(p.variables.size());
  for (std::size_t v = 0; v < p.objective.size(); ++v) {
    if (p.objective[v].size() != 0) q.objective[v] = 0.5 * embed(p.objective[v]);
  }
  for (const auto& eq : p.matrix_equalities) {
    MatrixEquality e;
    e.rhs = embed(eq.rhs);
    for (auto t : eq.terms) {
      if (t.map.kind == LinearMap::Kind::partial_transpose) {
        t.map.qubits += 1;
        t.map.subset <<= 1;
      }
      e.terms.push_back(t);
    }
    q.matrix_equalities.push_back(std::move(e));
  }
  for (const auto& eq : p.scalar_equalities) {
    ScalarEquality e;
    e.rhs = eq.rhs;
    for (const auto& t : eq.terms) e.terms.push_back({t.var, 0.5 * embed(0.5 * (t.coeff + t.coeff.adjoint()))});
    q.scalar_equalities.push_back(std::move(e));
  }
  return q;
}

}  // namespace qent::sdp
