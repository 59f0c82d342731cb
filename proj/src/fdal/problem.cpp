#include "fdal/problem.hpp"

#include <cmath>

namespace fdal {

GeometryKind geometry_from_string(const std::string &s) {
  if (s == "unit_square_41") return GeometryKind::unit_square_41;
  if (s == "square_in_square") return GeometryKind::square_in_square;
  if (s == "disk_in_square") return GeometryKind::disk_in_square;
  throw ConfigError("unknown geometry: " + s);
}

std::string to_string(GeometryKind g) {
  switch (g) {
    case GeometryKind::unit_square_41: return "unit_square_41";
    case GeometryKind::square_in_square: return "square_in_square";
    default: return "disk_in_square";
  }
}

BcType bc_from_string(const std::string &s) {
  if (s == "dirichlet_zero") return BcType::dirichlet_zero;
  if (s == "neumann_zero") return BcType::neumann_zero;
  throw ConfigError("unknown bc: " + s);
}

std::string to_string(BcType b) {
  return b == BcType::dirichlet_zero ? "dirichlet_zero" : "neumann_zero";
}

ForcingKind forcing_from_string(const std::string &s) {
  if (s == "constant") return ForcingKind::constant;
  if (s == "sin_tanh") return ForcingKind::sin_tanh;
  throw ConfigError("unknown forcing: " + s);
}

std::string to_string(ForcingKind f) {
  return f == ForcingKind::constant ? "constant" : "sin_tanh";
}

std::function<double(double, double)> forcing_f(ForcingKind kind) {
  if (kind == ForcingKind::constant) return [](double, double) { return 1.0; };
  return [](double x, double y) { return std::sin(M_PI * x) + std::tanh(y); };
}

std::function<double(double, double)> forcing_f2(ForcingKind kind) {
  if (kind == ForcingKind::constant) return [](double, double) { return 2.0; };
  // single forcing term: f2 coincides with f, so g = (f2 - f, .) vanishes
  return forcing_f(ForcingKind::sin_tanh);
}

void SaddleSystem::apply_original(const std::vector<double> &x, std::vector<double> &y) const {
  y.assign(n + m + ell, 0.0);
  const std::vector<double> x1(x.begin(), x.begin() + n);
  const std::vector<double> x2(x.begin() + n, x.begin() + n + m);
  const std::vector<double> xl(x.begin() + n + m, x.end());
  std::vector<double> y1 = A.multiply(x1);
  {
    std::vector<double> t = C.multiply_transpose(xl);
    for (int i = 0; i < n; ++i) y1[i] += t[i];
  }
  std::vector<double> y2 = A2.multiply(x2);
  {
    std::vector<double> t = C2.multiply_transpose(xl);
    for (int i = 0; i < m; ++i) y2[i] -= t[i];
  }
  std::vector<double> y3 = C.multiply(x1);
  {
    std::vector<double> t = C2.multiply(x2);
    for (int k = 0; k < ell; ++k) y3[k] -= t[k];
  }
  std::copy(y1.begin(), y1.end(), y.begin());
  std::copy(y2.begin(), y2.end(), y.begin() + n);
  std::copy(y3.begin(), y3.end(), y.begin() + n + m);
}

std::vector<double> SaddleSystem::rhs() const {
  std::vector<double> b(n + m + ell, 0.0);
  std::copy(f.begin(), f.end(), b.begin());
  std::copy(g.begin(), g.end(), b.begin() + n);
  return b;
}

double SaddleSystem::constraint_residual_inf(const std::vector<double> &x) const {
  const std::vector<double> x1(x.begin(), x.begin() + n);
  const std::vector<double> x2(x.begin() + n, x.begin() + n + m);
  std::vector<double> r = C.multiply(x1);
  std::vector<double> t = C2.multiply(x2);
  double s = 0.0;
  for (int k = 0; k < ell; ++k) s = std::max(s, std::abs(r[k] - t[k]));
  return s;
}

SaddleSystem build_saddle_system(const ProblemConfig &cfg) {
  if (!(cfg.beta > 0.0)) throw ConfigError("beta must be positive");
  if (!(cfg.beta2 > cfg.beta))
    throw ConfigError("beta2 must exceed beta (got beta2 = " + std::to_string(cfg.beta2) +
                      ", beta = " + std::to_string(cfg.beta) + ")");

  std::shared_ptr<Mesh> bg, im;
  switch (cfg.geometry) {
    case GeometryKind::unit_square_41:
      bg = std::make_shared<Mesh>(build_box_mesh({0.0, 0.0}, {1.0, 1.0}, cfg.bg_cells));
      im = std::make_shared<Mesh>(build_box_mesh({0.2, 0.2}, {0.5, 0.5}, cfg.immersed_param));
      break;
    case GeometryKind::square_in_square:
      bg = std::make_shared<Mesh>(build_box_mesh({-1.0, -1.0}, {1.0, 1.0}, cfg.bg_cells));
      im = std::make_shared<Mesh>(
          build_box_mesh({-0.14, -0.14}, {0.47, 0.47}, cfg.immersed_param));
      break;
    case GeometryKind::disk_in_square:
      bg = std::make_shared<Mesh>(build_box_mesh({-1.0, -1.0}, {1.0, 1.0}, cfg.bg_cells));
      im = std::make_shared<Mesh>(build_disk_mesh({0.0, 0.0}, 0.3, cfg.immersed_param));
      break;
  }
  const double ratio = im->h / bg->h;
  if (ratio < 0.5 || ratio > 2.0)
    throw ConfigError("mesh pair leaves h2/h = " + std::to_string(ratio) +
                      " outside [0.5, 2]");

  SaddleSystem sys;
  sys.bg_space = make_space(bg, cfg.bc == BcType::dirichlet_zero);
  sys.im_space = make_space(im, false);
  sys.beta = cfg.beta;
  sys.beta2 = cfg.beta2;
  sys.n = sys.bg_space.dof_count;
  sys.m = sys.im_space.dof_count;

  sys.A = assemble_stiffness(sys.bg_space, cfg.beta, cfg.bc == BcType::dirichlet_zero);
  sys.A2 = assemble_stiffness(sys.im_space, cfg.beta2 - cfg.beta, false);
  sys.M = assemble_mass(sys.im_space);
  sys.C2 = sys.M;  // Lambda_h = V_{2,h}
  sys.ell = sys.m;
  sys.C = assemble_coupling(sys.bg_space, sys.im_space, cfg.coupling_quad_order);

  const auto f_fn = forcing_f(cfg.forcing);
  const auto f2_fn = forcing_f2(cfg.forcing);
  sys.f = assemble_load(sys.bg_space, f_fn);
  sys.g = assemble_load(sys.im_space,
                        [&](double x, double y) { return f2_fn(x, y) - f_fn(x, y); });
  return sys;
}

}  // namespace fdal
