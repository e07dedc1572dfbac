#include "dgfem/assembly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>
#include <utility>

#include "dgfem/errors.hpp"

namespace dgfem {

namespace {

// ---------------------------------------------------------------------------
// Deterministic chunked execution.
//
// Work items (elements or edges) are split into contiguous index ranges, one
// per worker. Each worker appends into its own buffers while walking its
// range in ascending order; the buffers are then merged in chunk order, so
// the merged emission sequence is the plain ascending item order no matter
// how many threads ran. Combined with to_csr's stable duplicate summation
// this makes every assembled object bitwise independent of the thread count.
// ---------------------------------------------------------------------------

int chunk_count(int n_items, const Execution& exec) {
  return std::max(1, std::min(resolved_threads(exec), n_items));
}

template <typename Fn>
void run_chunks(int n_items, const Execution& exec, Fn&& fn) {
  if (n_items <= 0) {
    return;
  }
  const int n_chunks = chunk_count(n_items, exec);
  std::vector<std::exception_ptr> errors(n_chunks);
  auto body = [&](int c) {
    const int begin = static_cast<int>(static_cast<long long>(c) * n_items / n_chunks);
    const int end = static_cast<int>(static_cast<long long>(c + 1) * n_items / n_chunks);
    try {
      fn(c, begin, end);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
#ifdef _OPENMP
  if (n_chunks > 1) {
#pragma omp parallel for num_threads(n_chunks) schedule(static)
    for (int c = 0; c < n_chunks; ++c) {
      body(c);
    }
  } else {
    for (int c = 0; c < n_chunks; ++c) {
      body(c);
    }
  }
#else
  for (int c = 0; c < n_chunks; ++c) {
    body(c);
  }
#endif
  for (const auto& error : errors) {
    if (error) {
      std::rethrow_exception(error);
    }
  }
}

using PairList = std::vector<std::pair<int, double>>;

void apply_pairs(const std::vector<PairList>& chunks, std::vector<double>& target) {
  for (const PairList& list : chunks) {
    for (const auto& [index, value] : list) {
      target[index] += value;
    }
  }
}

Triplets merge_triplets(int n, std::initializer_list<const std::vector<Triplets>*> groups) {
  std::size_t total = 0;
  for (const auto* group : groups) {
    for (const Triplets& t : *group) {
      total += t.size();
    }
  }
  Triplets all(n);
  all.reserve(total);
  for (const auto* group : groups) {
    for (const Triplets& t : *group) {
      all.append(t);
    }
  }
  return all;
}

std::vector<ElementGeometry> all_geometry(const Mesh& mesh) {
  std::vector<ElementGeometry> geos;
  geos.reserve(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    geos.push_back(element_geometry(mesh, e));
  }
  return geos;
}

// One element adjacent to an edge: which local edge matches, whether its
// canonical local direction agrees with the global (sorted-pair) direction,
// and the trace sign in the jump convention (+1 for the element the edge
// normal leaves, -1 for the other).
struct Side {
  int element = -1;
  int local_edge = -1;
  int orient = 0;
  double sign = 1.0;
};

Side make_side(const Mesh& mesh, int edge, int element, double sign) {
  Side side;
  side.element = element;
  side.sign = sign;
  for (int l = 0; l < 3; ++l) {
    if (mesh.element_edges[element][l] == edge) {
      side.local_edge = l;
    }
  }
  side.orient =
      mesh.elements[element][(side.local_edge + 1) % 3] == mesh.edges[edge][0] ? 0 : 1;
  return side;
}

struct VolumeScratch {
  std::vector<double> px, py, a, bx, by;
  std::vector<double> gx, gy; // physical gradients, [q * n_local + j]
  std::vector<double> block;
};

void physical_volume_points(const ReferenceElement& ref, const ElementGeometry& geo,
                            VolumeScratch& s) {
  const TriangleRule& rule = ref.volume_rule();
  const int nq = rule.size();
  s.px.resize(nq);
  s.py.resize(nq);
  for (int q = 0; q < nq; ++q) {
    s.px[q] = geo.origin[0] + geo.jacobian[0][0] * rule.x[q] + geo.jacobian[0][1] * rule.y[q];
    s.py[q] = geo.origin[1] + geo.jacobian[1][0] * rule.x[q] + geo.jacobian[1][1] * rule.y[q];
  }
}

void physical_volume_grads(const ReferenceElement& ref, const ElementGeometry& geo,
                           VolumeScratch& s) {
  const int nq = ref.volume_rule().size();
  const int nl = ref.n_local();
  s.gx.resize(static_cast<std::size_t>(nq) * nl);
  s.gy.resize(static_cast<std::size_t>(nq) * nl);
  const auto& it = geo.inv_transpose;
  for (int q = 0; q < nq; ++q) {
    for (int j = 0; j < nl; ++j) {
      const double d0 = ref.dphi(q, j, 0);
      const double d1 = ref.dphi(q, j, 1);
      s.gx[static_cast<std::size_t>(q) * nl + j] = it[0][0] * d0 + it[0][1] * d1;
      s.gy[static_cast<std::size_t>(q) * nl + j] = it[1][0] * d0 + it[1][1] * d1;
    }
  }
}

void emit_block(const DofMap& dof, int row_element, int col_element,
                const std::vector<double>& block, int nl, Triplets& out) {
  for (int i = 0; i < nl; ++i) {
    for (int j = 0; j < nl; ++j) {
      out.add(dof.global(row_element, i), dof.global(col_element, j), block[i * nl + j]);
    }
  }
}

// Everything evaluated once per edge and shared by the diffusion, convection
// and load face kernels: physical quadrature points and weights along the
// global (sorted-pair) direction, the normal, and per-side trace tables.
struct EdgeScratch {
  std::vector<double> px, py, w;
  std::vector<double> eps, bx, by, gd, gn;
  std::vector<double> phi[2]; // [q * n_local + j]
  std::vector<double> dn[2];  // normal derivative of the trace
  std::vector<double> block[4];
};

struct EdgeContext {
  int n_sides = 1;
  Side side[2];
  double nx = 0.0, ny = 0.0;
  double h = 0.0;
};

EdgeContext edge_context(const Mesh& mesh, const ReferenceElement& ref,
                         const std::vector<ElementGeometry>& geos, int edge,
                         bool with_grads, EdgeScratch& s) {
  EdgeContext ctx;
  const EdgeGeometryData eg = edge_geometry(mesh, edge);
  ctx.nx = eg.normal[0];
  ctx.ny = eg.normal[1];
  ctx.h = eg.length;
  const EdgeElements& adj = mesh.edge_elements[edge];
  ctx.side[0] = make_side(mesh, edge, adj.left, 1.0);
  ctx.n_sides = adj.is_boundary() ? 1 : 2;
  if (ctx.n_sides == 2) {
    ctx.side[1] = make_side(mesh, edge, adj.right, -1.0);
  }

  const Gauss1D& pts = ref.edge_points();
  const int nq = pts.size();
  const int nl = ref.n_local();
  const Node& a = mesh.nodes[mesh.edges[edge][0]];
  const Node& b = mesh.nodes[mesh.edges[edge][1]];
  s.px.resize(nq);
  s.py.resize(nq);
  s.w.resize(nq);
  for (int q = 0; q < nq; ++q) {
    s.px[q] = a.x + pts.t[q] * (b.x - a.x);
    s.py[q] = a.y + pts.t[q] * (b.y - a.y);
    s.w[q] = pts.w[q] * eg.length;
  }
  for (int k = 0; k < ctx.n_sides; ++k) {
    const Side& side = ctx.side[k];
    s.phi[k].resize(static_cast<std::size_t>(nq) * nl);
    for (int q = 0; q < nq; ++q) {
      for (int j = 0; j < nl; ++j) {
        s.phi[k][static_cast<std::size_t>(q) * nl + j] =
            ref.edge_phi(side.local_edge, side.orient, q, j);
      }
    }
    if (with_grads) {
      const auto& it = geos[side.element].inv_transpose;
      s.dn[k].resize(static_cast<std::size_t>(nq) * nl);
      for (int q = 0; q < nq; ++q) {
        for (int j = 0; j < nl; ++j) {
          const double d0 = ref.edge_dphi(side.local_edge, side.orient, q, j, 0);
          const double d1 = ref.edge_dphi(side.local_edge, side.orient, q, j, 1);
          const double gx = it[0][0] * d0 + it[0][1] * d1;
          const double gy = it[1][0] * d0 + it[1][1] * d1;
          s.dn[k][static_cast<std::size_t>(q) * nl + j] = gx * ctx.nx + gy * ctx.ny;
        }
      }
    }
  }
  return ctx;
}

// Dirichlet data term of the load: gD (sigma_b eps/h v + kappa eps grad(v).n).
// The kappa factor keeps the right-hand side consistent with the
// symmetrization term for every method, so exact polynomial data is
// reproduced by SIPG, NIPG and IIPG alike.
void emit_dirichlet_rhs(const ReferenceElement& ref, const DgParameters& params,
                        const EdgeContext& ctx, const EdgeScratch& s, const DofMap& dof,
                        PairList& rhs) {
  const int nq = ref.edge_points().size();
  const int nl = ref.n_local();
  for (int i = 0; i < nl; ++i) {
    double val = 0.0;
    for (int q = 0; q < nq; ++q) {
      const double wgd = s.w[q] * s.gd[q];
      const double pen = (params.sigma_boundary / ctx.h) * s.eps[q] *
                         s.phi[0][static_cast<std::size_t>(q) * nl + i];
      const double sym =
          params.kappa * (s.eps[q] * s.dn[0][static_cast<std::size_t>(q) * nl + i]);
      val += wgd * (pen + sym);
    }
    rhs.emplace_back(dof.global(ctx.side[0].element, i), val);
  }
}

void diffusion_edge(const Mesh& mesh, const ReferenceElement& ref,
                    const std::vector<ElementGeometry>& geos, const ProblemSpec& problem,
                    const DgParameters& params, int edge, const DofMap& dof, EdgeScratch& s,
                    Triplets& out, PairList& rhs) {
  const EdgeKind kind = mesh.edge_kind[edge];
  if (kind == EdgeKind::Neumann) {
    return;
  }
  const bool boundary = kind == EdgeKind::Dirichlet;
  const EdgeContext ctx = edge_context(mesh, ref, geos, edge, true, s);
  const int nq = ref.edge_points().size();
  const int nl = ref.n_local();

  s.eps.resize(nq);
  problem.diffusion(s.px, s.py, s.eps);
  const double sigma = boundary ? params.sigma_boundary : params.sigma_interior;
  const double avg = boundary ? 1.0 : 0.5;

  for (int a = 0; a < ctx.n_sides; ++a) {
    for (int b = 0; b < ctx.n_sides; ++b) {
      const double s_ab = ctx.side[a].sign * ctx.side[b].sign;
      std::vector<double>& block = s.block[0];
      block.assign(static_cast<std::size_t>(nl) * nl, 0.0);
      for (int q = 0; q < nq; ++q) {
        const double we = s.w[q] * s.eps[q];
        const double pen_w = (sigma / ctx.h) * we;
        const double base = avg * we;
        const double cons_w = -(ctx.side[a].sign * base);
        const double sym_w = params.kappa * (ctx.side[b].sign * base);
        const double* phi_a = &s.phi[a][static_cast<std::size_t>(q) * nl];
        const double* phi_b = &s.phi[b][static_cast<std::size_t>(q) * nl];
        const double* dn_a = &s.dn[a][static_cast<std::size_t>(q) * nl];
        const double* dn_b = &s.dn[b][static_cast<std::size_t>(q) * nl];
        for (int i = 0; i < nl; ++i) {
          for (int j = 0; j < nl; ++j) {
            const double pen = pen_w * (s_ab * (phi_b[j] * phi_a[i]));
            const double cons = cons_w * (dn_b[j] * phi_a[i]);
            const double sym = sym_w * (dn_a[i] * phi_b[j]);
            block[i * nl + j] += pen + (cons + sym);
          }
        }
      }
      emit_block(dof, ctx.side[a].element, ctx.side[b].element, block, nl, out);
    }
  }

  if (boundary) {
    s.gd.resize(nq);
    problem.dirichlet(s.px, s.py, s.gd);
    emit_dirichlet_rhs(ref, params, ctx, s, dof, rhs);
  }
}

/// Upwind classification threshold: |b.n| below this counts as tangential
/// flow, which contributes nothing and is legal on any boundary.
double inflow_tolerance(double bx, double by) {
  return 1e-12 * std::max(1.0, std::hypot(bx, by));
}

void convection_edge(const Mesh& mesh, const ReferenceElement& ref,
                     const std::vector<ElementGeometry>& geos, const ProblemSpec& problem,
                     int edge, const DofMap& dof, EdgeScratch& s, Triplets& out,
                     PairList& rhs) {
  const EdgeContext ctx = edge_context(mesh, ref, geos, edge, false, s);
  const int nq = ref.edge_points().size();
  const int nl = ref.n_local();

  s.bx.resize(nq);
  s.by.resize(nq);
  problem.advection(s.px, s.py, s.bx, s.by);

  if (ctx.n_sides == 2) {
    // Interior edge: at each point the element the flow enters receives the
    // upwind coupling b.n_K (u^out - u^in) v with its own outward normal.
    bool touched[4] = {false, false, false, false};
    for (int k = 0; k < 4; ++k) {
      s.block[k].assign(static_cast<std::size_t>(nl) * nl, 0.0);
    }
    for (int q = 0; q < nq; ++q) {
      const double flux = s.bx[q] * ctx.nx + s.by[q] * ctx.ny;
      if (flux == 0.0) {
        continue;
      }
      const double ws = s.w[q] * flux;
      const int recv = flux > 0.0 ? 1 : 0; // side whose outward normal opposes the flow
      const int give = 1 - recv;
      // v and u^in from recv get +|b.n|, u^out from give gets -|b.n|;
      // with ws = w b.n_e those signs are -ws and +ws for recv = right,
      // mirrored for recv = left.
      const double own = recv == 1 ? ws : -ws;
      const double other = -own;
      std::vector<double>& diag = s.block[recv * 2 + recv];
      std::vector<double>& off = s.block[recv * 2 + give];
      touched[recv * 2 + recv] = true;
      touched[recv * 2 + give] = true;
      const double* phi_r = &s.phi[recv][static_cast<std::size_t>(q) * nl];
      const double* phi_g = &s.phi[give][static_cast<std::size_t>(q) * nl];
      for (int i = 0; i < nl; ++i) {
        for (int j = 0; j < nl; ++j) {
          diag[i * nl + j] += own * (phi_r[j] * phi_r[i]);
          off[i * nl + j] += other * (phi_g[j] * phi_r[i]);
        }
      }
    }
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        if (touched[a * 2 + b]) {
          emit_block(dof, ctx.side[a].element, ctx.side[b].element, s.block[a * 2 + b], nl, out);
        }
      }
    }
    return;
  }

  // Boundary edge: only the inflow part carries terms; the matrix gets
  // -b.n u v and the load pairs it with -b.n gD v. Inflow across a Neumann
  // edge has no data to upwind from, which is a hard input error.
  const EdgeKind kind = mesh.edge_kind[edge];
  bool any_inflow = false;
  for (int q = 0; q < nq; ++q) {
    const double flux = s.bx[q] * ctx.nx + s.by[q] * ctx.ny;
    if (flux < -inflow_tolerance(s.bx[q], s.by[q])) {
      if (kind == EdgeKind::Neumann) {
        throw Error(ErrorCode::InflowOnNeumann,
                    "inflow across a Neumann edge: no boundary data to upwind from", edge);
      }
      any_inflow = true;
    }
  }
  if (!any_inflow) {
    return;
  }

  std::vector<double>& block = s.block[0];
  block.assign(static_cast<std::size_t>(nl) * nl, 0.0);
  s.gd.resize(nq);
  problem.dirichlet(s.px, s.py, s.gd);
  std::vector<double> rhs_local(nl, 0.0);
  for (int q = 0; q < nq; ++q) {
    const double flux = s.bx[q] * ctx.nx + s.by[q] * ctx.ny;
    if (flux >= 0.0) {
      continue;
    }
    const double win = -(s.w[q] * flux);
    const double* phi = &s.phi[0][static_cast<std::size_t>(q) * nl];
    for (int i = 0; i < nl; ++i) {
      for (int j = 0; j < nl; ++j) {
        block[i * nl + j] += win * (phi[j] * phi[i]);
      }
      rhs_local[i] += (win * s.gd[q]) * phi[i];
    }
  }
  emit_block(dof, ctx.side[0].element, ctx.side[0].element, block, nl, out);
  for (int i = 0; i < nl; ++i) {
    rhs.emplace_back(dof.global(ctx.side[0].element, i), rhs_local[i]);
  }
}

void neumann_rhs(const Mesh& mesh, const ReferenceElement& ref,
                 const std::vector<ElementGeometry>& geos, const ProblemSpec& problem,
                 int edge, const DofMap& dof, EdgeScratch& s, PairList& rhs) {
  const EdgeContext ctx = edge_context(mesh, ref, geos, edge, false, s);
  const int nq = ref.edge_points().size();
  const int nl = ref.n_local();
  s.gn.resize(nq);
  problem.neumann(s.px, s.py, s.gn);
  for (int i = 0; i < nl; ++i) {
    double val = 0.0;
    for (int q = 0; q < nq; ++q) {
      val += (s.w[q] * s.gn[q]) * s.phi[0][static_cast<std::size_t>(q) * nl + i];
    }
    rhs.emplace_back(dof.global(ctx.side[0].element, i), val);
  }
}

} // namespace

DgMethod method_from_string(const std::string& name) {
  std::string lower;
  lower.reserve(name.size());
  for (char c : name) {
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lower == "sipg" || lower == "2") {
    return DgMethod::SIPG;
  }
  if (lower == "nipg" || lower == "1") {
    return DgMethod::NIPG;
  }
  if (lower == "iipg" || lower == "3") {
    return DgMethod::IIPG;
  }
  throw Error(ErrorCode::UnknownMethod,
              "unknown method '" + name + "'; expected sipg, nipg, iipg or codes 1-3");
}

const char* to_string(DgMethod method) {
  switch (method) {
    case DgMethod::SIPG: return "SIPG";
    case DgMethod::NIPG: return "NIPG";
    case DgMethod::IIPG: return "IIPG";
  }
  return "?";
}

int method_code(DgMethod method) {
  switch (method) {
    case DgMethod::NIPG: return 1;
    case DgMethod::SIPG: return 2;
    case DgMethod::IIPG: return 3;
  }
  return 0;
}

DgParameters set_parameters(DgMethod method, int degree) {
  if (degree < 1) {
    throw Error(ErrorCode::InvalidArgument, "polynomial degree must be at least 1", degree);
  }
  DgParameters params;
  params.method = method;
  params.degree = degree;
  switch (method) {
    case DgMethod::SIPG:
      params.kappa = -1.0;
      params.sigma_interior = 3.0 * degree * (degree + 1);
      break;
    case DgMethod::NIPG:
      params.kappa = 1.0;
      params.sigma_interior = 1.0;
      break;
    case DgMethod::IIPG:
      params.kappa = 0.0;
      params.sigma_interior = 3.0 * degree * (degree + 1);
      break;
  }
  params.sigma_boundary = 2.0 * params.sigma_interior;
  return params;
}

CsrMatrix DgSystem::stiffness() const {
  return add(add(D, C), R);
}

DiffusionResult assemble_diffusion(const Mesh& mesh, const ReferenceElement& ref,
                                   const ProblemSpec& problem, const DgParameters& params,
                                   const Execution& exec) {
  const DofMap dof{ref.n_local(), mesh.n_elements()};
  const int n = dof.n_total();
  const int nl = ref.n_local();
  const std::vector<ElementGeometry> geos = all_geometry(mesh);

  std::vector<Triplets> vol(chunk_count(mesh.n_elements(), exec), Triplets(n));
  run_chunks(mesh.n_elements(), exec, [&](int c, int begin, int end) {
    VolumeScratch s;
    const TriangleRule& rule = ref.volume_rule();
    const int nq = rule.size();
    for (int el = begin; el < end; ++el) {
      physical_volume_points(ref, geos[el], s);
      physical_volume_grads(ref, geos[el], s);
      s.a.resize(nq);
      problem.diffusion(s.px, s.py, s.a);
      s.block.assign(static_cast<std::size_t>(nl) * nl, 0.0);
      for (int q = 0; q < nq; ++q) {
        const double scale = geos[el].det * rule.w[q] * s.a[q];
        const double* gx = &s.gx[static_cast<std::size_t>(q) * nl];
        const double* gy = &s.gy[static_cast<std::size_t>(q) * nl];
        for (int i = 0; i < nl; ++i) {
          for (int j = 0; j < nl; ++j) {
            s.block[i * nl + j] += scale * (gx[j] * gx[i] + gy[j] * gy[i]);
          }
        }
      }
      emit_block(dof, el, el, s.block, nl, vol[c]);
    }
  });

  std::vector<Triplets> face(chunk_count(mesh.n_edges(), exec), Triplets(n));
  std::vector<PairList> rhs(face.size());
  run_chunks(mesh.n_edges(), exec, [&](int c, int begin, int end) {
    EdgeScratch s;
    for (int e = begin; e < end; ++e) {
      diffusion_edge(mesh, ref, geos, problem, params, e, dof, s, face[c], rhs[c]);
    }
  });

  DiffusionResult result;
  result.D = to_csr(merge_triplets(n, {&vol, &face}));
  result.F_D.assign(n, 0.0);
  apply_pairs(rhs, result.F_D);
  return result;
}

ConvectionResult assemble_convection(const Mesh& mesh, const ReferenceElement& ref,
                                     const ProblemSpec& problem, const Execution& exec) {
  const DofMap dof{ref.n_local(), mesh.n_elements()};
  const int n = dof.n_total();
  const int nl = ref.n_local();
  const std::vector<ElementGeometry> geos = all_geometry(mesh);

  std::vector<Triplets> vol(chunk_count(mesh.n_elements(), exec), Triplets(n));
  run_chunks(mesh.n_elements(), exec, [&](int c, int begin, int end) {
    VolumeScratch s;
    const TriangleRule& rule = ref.volume_rule();
    const int nq = rule.size();
    for (int el = begin; el < end; ++el) {
      physical_volume_points(ref, geos[el], s);
      physical_volume_grads(ref, geos[el], s);
      s.bx.resize(nq);
      s.by.resize(nq);
      problem.advection(s.px, s.py, s.bx, s.by);
      s.block.assign(static_cast<std::size_t>(nl) * nl, 0.0);
      for (int q = 0; q < nq; ++q) {
        const double scale = geos[el].det * rule.w[q];
        const double* gx = &s.gx[static_cast<std::size_t>(q) * nl];
        const double* gy = &s.gy[static_cast<std::size_t>(q) * nl];
        for (int i = 0; i < nl; ++i) {
          const double wphi = scale * ref.phi(q, i);
          for (int j = 0; j < nl; ++j) {
            s.block[i * nl + j] += wphi * (s.bx[q] * gx[j] + s.by[q] * gy[j]);
          }
        }
      }
      emit_block(dof, el, el, s.block, nl, vol[c]);
    }
  });

  std::vector<Triplets> face(chunk_count(mesh.n_edges(), exec), Triplets(n));
  std::vector<PairList> rhs(face.size());
  run_chunks(mesh.n_edges(), exec, [&](int c, int begin, int end) {
    EdgeScratch s;
    for (int e = begin; e < end; ++e) {
      convection_edge(mesh, ref, geos, problem, e, dof, s, face[c], rhs[c]);
    }
  });

  ConvectionResult result;
  result.C = to_csr(merge_triplets(n, {&vol, &face}));
  result.F_C.assign(n, 0.0);
  apply_pairs(rhs, result.F_C);
  return result;
}

CsrMatrix assemble_reaction(const Mesh& mesh, const ReferenceElement& ref,
                            const ProblemSpec& problem, const Execution& exec) {
  const DofMap dof{ref.n_local(), mesh.n_elements()};
  const int n = dof.n_total();
  const int nl = ref.n_local();
  const std::vector<ElementGeometry> geos = all_geometry(mesh);

  std::vector<Triplets> vol(chunk_count(mesh.n_elements(), exec), Triplets(n));
  run_chunks(mesh.n_elements(), exec, [&](int c, int begin, int end) {
    VolumeScratch s;
    const TriangleRule& rule = ref.volume_rule();
    const int nq = rule.size();
    for (int el = begin; el < end; ++el) {
      physical_volume_points(ref, geos[el], s);
      s.a.resize(nq);
      problem.linear_reaction(s.px, s.py, s.a);
      s.block.assign(static_cast<std::size_t>(nl) * nl, 0.0);
      for (int q = 0; q < nq; ++q) {
        const double scale = geos[el].det * rule.w[q] * s.a[q];
        for (int i = 0; i < nl; ++i) {
          for (int j = 0; j < nl; ++j) {
            s.block[i * nl + j] += scale * (ref.phi(q, j) * ref.phi(q, i));
          }
        }
      }
      emit_block(dof, el, el, s.block, nl, vol[c]);
    }
  });

  return to_csr(merge_triplets(n, {&vol}));
}

std::vector<double> assemble_load(const Mesh& mesh, const ReferenceElement& ref,
                                  const ProblemSpec& problem, const DgParameters& params,
                                  const Execution& exec) {
  const DofMap dof{ref.n_local(), mesh.n_elements()};
  const int n = dof.n_total();
  const int nl = ref.n_local();
  const std::vector<ElementGeometry> geos = all_geometry(mesh);

  std::vector<double> load(n, 0.0);
  // Volume source: each element owns its slice of the load vector, so the
  // workers write directly without any merge step.
  run_chunks(mesh.n_elements(), exec, [&](int, int begin, int end) {
    VolumeScratch s;
    const TriangleRule& rule = ref.volume_rule();
    const int nq = rule.size();
    for (int el = begin; el < end; ++el) {
      physical_volume_points(ref, geos[el], s);
      s.a.resize(nq);
      problem.source(s.px, s.py, s.a);
      for (int i = 0; i < nl; ++i) {
        double val = 0.0;
        for (int q = 0; q < nq; ++q) {
          val += (geos[el].det * rule.w[q] * s.a[q]) * ref.phi(q, i);
        }
        load[dof.global(el, i)] += val;
      }
    }
  });

  std::vector<PairList> rhs(chunk_count(mesh.n_edges(), exec));
  run_chunks(mesh.n_edges(), exec, [&](int c, int begin, int end) {
    EdgeScratch s;
    for (int e = begin; e < end; ++e) {
      const EdgeKind kind = mesh.edge_kind[e];
      if (kind == EdgeKind::Interior) {
        continue;
      }
      if (kind == EdgeKind::Neumann) {
        neumann_rhs(mesh, ref, geos, problem, e, dof, s, rhs[c]);
        continue;
      }
      const EdgeContext ctx = edge_context(mesh, ref, geos, e, true, s);
      const int nq = ref.edge_points().size();
      s.eps.resize(nq);
      s.gd.resize(nq);
      problem.diffusion(s.px, s.py, s.eps);
      problem.dirichlet(s.px, s.py, s.gd);
      emit_dirichlet_rhs(ref, params, ctx, s, dof, rhs[c]);

      s.bx.resize(nq);
      s.by.resize(nq);
      problem.advection(s.px, s.py, s.bx, s.by);
      bool any_inflow = false;
      for (int q = 0; q < nq; ++q) {
        const double flux = s.bx[q] * ctx.nx + s.by[q] * ctx.ny;
        if (flux < -inflow_tolerance(s.bx[q], s.by[q])) {
          any_inflow = true;
        }
      }
      if (!any_inflow) {
        continue;
      }
      std::vector<double> rhs_local(nl, 0.0);
      for (int q = 0; q < nq; ++q) {
        const double flux = s.bx[q] * ctx.nx + s.by[q] * ctx.ny;
        if (flux >= 0.0) {
          continue;
        }
        const double win = -(s.w[q] * flux);
        for (int i = 0; i < nl; ++i) {
          rhs_local[i] += (win * s.gd[q]) * s.phi[0][static_cast<std::size_t>(q) * nl + i];
        }
      }
      for (int i = 0; i < nl; ++i) {
        rhs[c].emplace_back(dof.global(ctx.side[0].element, i), rhs_local[i]);
      }
    }
  });
  apply_pairs(rhs, load);
  return load;
}

DgSystem assemble_all(const Mesh& mesh, const ReferenceElement& ref,
                      const ProblemSpec& problem, const DgParameters& params,
                      const Execution& exec) {
  DgSystem system;
  DiffusionResult diffusion = assemble_diffusion(mesh, ref, problem, params, exec);
  ConvectionResult convection = assemble_convection(mesh, ref, problem, exec);
  system.D = std::move(diffusion.D);
  system.C = std::move(convection.C);
  system.R = assemble_reaction(mesh, ref, problem, exec);
  system.F = assemble_load(mesh, ref, problem, params, exec);
  system.n = DofMap{ref.n_local(), mesh.n_elements()}.n_total();
  return system;
}

} // namespace dgfem
