#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "dynrt/rt.hpp"

namespace oracle {

namespace {

constexpr double kPi = 3.14159265358979323846;
const Complex kJ{0.0, 1.0};

}  // namespace

Complex transition(double x) {
  if (x <= 0.0) return 0.0;
  const double u0 = std::sqrt(x);
  const double u1 = u0 + 60.0;
  const int n = 600000;
  const double h = (u1 - u0) / n;
  Complex s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = u0 + i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * std::polar(1.0, -t * t);
  }
  s *= h / 3.0;
  const Complex z = 2.0 * kJ * u1 * u1;
  s += std::polar(1.0, -u1 * u1) / (2.0 * kJ * u1) * (1.0 - 1.0 / z + 3.0 / (z * z));
  return 2.0 * kJ * u0 * std::polar(1.0, x) * s;
}

Complex fresnel_perp(double theta, Complex eps) {
  const Complex root = std::sqrt(eps - std::pow(std::sin(theta), 2));
  return (std::cos(theta) - root) / (std::cos(theta) + root);
}

Complex fresnel_par(double theta, Complex eps) {
  const Complex root = std::sqrt(eps - std::pow(std::sin(theta), 2));
  return (eps * std::cos(theta) - root) / (eps * std::cos(theta) + root);
}

Complex slab_perp(double theta, Complex eps) {
  // n1 cos(theta_i) and n2 cos(theta_t), the latter continued to complex eps.
  const double a = std::cos(theta);
  const Complex b = std::sqrt(eps) * std::sqrt(1.0 - std::pow(std::sin(theta), 2) / eps);
  const Complex t12 = 2.0 * a / (a + b);
  const Complex t21 = 2.0 * b / (b + a);
  return t12 * t21;
}

double slab_length(double theta, double eps_r, double thickness) {
  const double theta_t = std::asin(std::sin(theta) / std::sqrt(eps_r));
  return thickness / std::cos(theta_t);
}

Complex utd_soft(double phi, double phi_inc, double beta0, double n, double L, double k) {
  auto term = [&](double beta, int pm) {
    const double big_n = std::round((beta + pm * kPi) / (2.0 * kPi * n));
    const double a = 2.0 * std::pow(std::cos((2.0 * kPi * n * big_n - beta) / 2.0), 2);
    const double ang = (kPi + pm * beta) / (2.0 * n);
    return std::cos(ang) / std::sin(ang) * transition(k * L * a);
  };
  const double bm = phi - phi_inc;
  const double bp = phi + phi_inc;
  const Complex pre = -std::polar(1.0, -kPi / 4.0) / (2.0 * n * std::sqrt(2.0 * kPi * k) * std::sin(beta0));
  return pre * ((term(bm, +1) + term(bm, -1)) - (term(bp, +1) + term(bp, -1)));
}

bool segment_hits_polygon(const Vec3& a, const Vec3& b, const std::vector<Vec3>& poly) {
  Vec3 nrm{};
  for (std::size_t i = 0; i < poly.size(); ++i) nrm += dynrt::cross(poly[i], poly[(i + 1) % poly.size()]);
  nrm = nrm / dynrt::norm(nrm);
  const double da = dynrt::dot(a - poly[0], nrm);
  const double db = dynrt::dot(b - poly[0], nrm);
  if (std::abs(da) < 1e-7 || std::abs(db) < 1e-7 || (da > 0) == (db > 0)) return false;
  const Vec3 x = a + (b - a) * (da / (da - db));
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec3& p = poly[i];
    const Vec3& q = poly[(i + 1) % poly.size()];
    if (dynrt::dot(dynrt::cross(q - p, x - p), nrm) <= 1e-7) return false;
  }
  return true;
}

bool Sweep::has(std::size_t k, const dynrt::PathSignature& s) const {
  return std::binary_search(present[k].begin(), present[k].end(), s);
}

Sweep rt_sweep(const dynrt::Scene& scene, const std::vector<double>& times) {
  Sweep s;
  s.times = times;
  for (double t : times) {
    std::vector<dynrt::PathSignature> sigs;
    for (const auto& p : dynrt::trace_snapshot(scene, t).paths) sigs.push_back(p.signature);
    std::sort(sigs.begin(), sigs.end());
    s.present.push_back(std::move(sigs));
  }
  return s;
}

std::optional<double> last_appearance(const Sweep& s, const dynrt::PathSignature& sig) {
  if (s.times.empty() || !s.has(0, sig)) return std::nullopt;
  std::size_t k = 0;
  while (k + 1 < s.times.size() && s.has(k + 1, sig)) ++k;
  return s.times[k];
}

std::optional<double> first_appearance(const Sweep& s, const dynrt::PathSignature& sig) {
  if (s.times.empty() || !s.has(s.times.size() - 1, sig)) return std::nullopt;
  std::size_t k = s.times.size() - 1;
  while (k > 0 && s.has(k - 1, sig)) --k;
  return s.times[k];
}

dynrt::Scene random_scene(std::uint64_t seed, bool swap_ends) {
  using dynrt::Edge;
  using dynrt::Facet;
  using dynrt::Material;
  using dynrt::Motion;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };

  std::vector<Facet> facets;
  std::vector<Edge> edges;
  auto material = [&]() {
    Material m;
    m.rel_permittivity = uni(2.0, 10.0);
    m.conductivity = uni(0.0, 0.1);
    return m;
  };
  auto wall = [&](const std::string& id, const Vec3& a, const Vec3& b, double h, const Material& m,
                  const Motion& mo, double thickness) {
    Facet f;
    f.id = id;
    f.vertices = {{a.x, a.y, 0.0}, {b.x, b.y, 0.0}, {b.x, b.y, h}, {a.x, a.y, h}};
    f.material = m;
    f.thickness = thickness;
    f.motion = mo;
    facets.push_back(std::move(f));
    return facets.size() - 1;
  };

  struct Footprint {
    Vec3 c;
    double r;
  };
  std::vector<Footprint> solids;

  // One object per cell of a 3 x 3 grid of 14 m cells, so objects never overlap.
  int id = 0;
  for (int cx = -1; cx <= 1; ++cx) {
    for (int cy = -1; cy <= 1; ++cy) {
      if (u(rng) < 0.35) continue;
      const Vec3 c{cx * 14.0 + uni(-2.0, 2.0), cy * 14.0 + uni(-2.0, 2.0), 0.0};
      const double yaw = uni(0.0, 2.0 * kPi);
      const Vec3 ex{std::cos(yaw), std::sin(yaw), 0.0};
      const Vec3 ey{-std::sin(yaw), std::cos(yaw), 0.0};
      const double h = uni(3.0, 10.0);
      const Motion mo = u(rng) < 0.3 ? Motion::linear({}, {uni(-2.0, 2.0), uni(-2.0, 2.0), 0.0})
                                     : Motion::stationary({});
      const std::string name = "o" + std::to_string(id++);
      const double kind = u(rng);
      if (kind < 0.5) {
        const double hx = uni(1.0, 3.5);
        const double hy = uni(1.0, 3.5);
        const Vec3 p[4] = {c - ex * hx - ey * hy, c + ex * hx - ey * hy, c + ex * hx + ey * hy,
                           c - ex * hx + ey * hy};
        const Material m = material();
        std::size_t w[4];
        for (int i = 0; i < 4; ++i) w[i] = wall(name + "_w" + std::to_string(i), p[i], p[(i + 1) % 4], h, m, mo, 0.2);
        for (int i = 0; i < 4; ++i)
          edges.push_back(Edge{name + "_c" + std::to_string(i), {p[i].x, p[i].y, 0.0}, {p[i].x, p[i].y, h},
                               {w[i], w[(i + 3) % 4]}, 1.5 * kPi});
        solids.push_back({c, std::hypot(hx, hy) + 0.5});
      } else {
        const double half = uni(1.5, 5.0);
        const Vec3 a = c - ex * half;
        const Vec3 b = c + ex * half;
        Material m = material();
        double thickness = 0.2;
        if (kind < 0.8) {
          m.transparent = true;
          m.attenuation_alpha = uni(0.0, 3.0);
          thickness = uni(0.01, 0.1);
        }
        const std::size_t f = wall(name + "_panel", a, b, h, m, mo, thickness);
        edges.push_back(Edge{name + "_e0", {a.x, a.y, 0.0}, {a.x, a.y, h}, {f, f}, 2.0 * kPi});
        edges.push_back(Edge{name + "_e1", {b.x, b.y, 0.0}, {b.x, b.y, h}, {f, f}, 2.0 * kPi});
      }
    }
  }

  auto free_point = [&]() {
    for (;;) {
      const Vec3 p{uni(-22.0, 22.0), uni(-22.0, 22.0), 1.5};
      bool ok = true;
      for (const auto& s : solids)
        if (std::hypot(p.x - s.c.x, p.y - s.c.y) < s.r + 2.0) ok = false;
      if (ok) return p;
    }
  };
  // Antennas move slowly enough to stay clear of the solids over the short test windows.
  Motion tx = Motion::linear(free_point(), {uni(-1.0, 1.0), uni(-1.0, 1.0), 0.0});
  Motion rx = Motion::linear(free_point(), {uni(-1.0, 1.0), uni(-1.0, 1.0), 0.0});
  if (swap_ends) std::swap(tx, rx);
  return dynrt::Scene(std::move(facets), std::move(edges), tx, rx, 6e9, 30.0);
}

}  // namespace oracle
