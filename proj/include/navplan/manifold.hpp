#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "navplan/rng.hpp"

namespace navplan {

// Shared numeric tolerances. The geometry is closed-form, so these are
// verification margins, not solver knobs.
inline constexpr double kTolOn = 1e-9;       // on-manifold constraint
inline constexpr double kTolJoin = 1e-6;     // path endpoint matching
inline constexpr double kEpsLen = 1e-6;      // geodesic length ties
inline constexpr double kThetaMin = 1e-3;    // direction separation [rad]
inline constexpr int kContinuumSamples = 8;  // finite sample of a minimizer continuum
inline constexpr double kPi = 3.14159265358979323846;

// Raised when a user-supplied configuration is inconsistent (unsupported
// kind combination, bad recipe parameters, malformed config file).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ManifoldKind { Circle, Sphere, Torus, RealProjective, Product, Euclidean };

// Catalog manifold descriptor. Points are stored in embedded/angle
// coordinates: angles in [0, 2pi) for Circle/Torus, unit vectors in R^{n+1}
// for Sphere, sign-canonical unit vectors for RealProjective, concatenated
// factor coordinates for Product. Circle compares equal to Torus(1).
class ManifoldSpec {
 public:
  static ManifoldSpec circle();
  static ManifoldSpec sphere(int n);
  static ManifoldSpec torus(int n);
  static ManifoldSpec real_projective(int n);
  static ManifoldSpec product(std::vector<ManifoldSpec> factors);
  static ManifoldSpec euclidean(int n);

  ManifoldKind kind() const { return kind_; }
  int dimension() const { return dim_; }       // intrinsic dimension
  int ambient_size() const { return ambient_; }  // stored coordinate count
  const std::vector<ManifoldSpec>& factors() const { return *factors_; }
  bool is_angular() const { return kind_ == ManifoldKind::Circle || kind_ == ManifoldKind::Torus; }

  std::string to_string() const;

  friend bool operator==(const ManifoldSpec& a, const ManifoldSpec& b);
  friend bool operator!=(const ManifoldSpec& a, const ManifoldSpec& b) { return !(a == b); }

 private:
  ManifoldSpec(ManifoldKind k, int dim, int ambient)
      : kind_(k), dim_(dim), ambient_(ambient), factors_(std::make_shared<std::vector<ManifoldSpec>>()) {}
  ManifoldKind kind_;
  int dim_;
  int ambient_;
  std::shared_ptr<std::vector<ManifoldSpec>> factors_;  // Product only
};

struct Point {
  ManifoldSpec manifold;
  std::vector<double> coords;
};

struct TangentVector {
  Point base;
  std::vector<double> components;  // same chart as the base coordinates
};

struct PathSample {
  double t = 0.0;
  Point point;
};

// Time-parametrized on-manifold polyline over [0,1], t strictly increasing.
struct Path {
  ManifoldSpec manifold;
  std::vector<PathSample> samples;
};

struct GeodesicSegment {
  Point start;
  TangentVector initial_velocity;  // unit speed whenever length > 0
  double length = 0.0;
};

struct MinimizingGeodesics {
  std::vector<GeodesicSegment> segments;
  bool continuum = false;  // infinitely many minimizers; `segments` is a finite sample
};

// Construction with validation: coordinates are checked against the manifold
// constraint within kTolOn and then canonicalized exactly (angle wrap, unit
// normalization, projective sign).
Point make_point(const ManifoldSpec& m, std::vector<double> coords);
TangentVector make_tangent(const Point& base, std::vector<double> components);
Path make_path(const ManifoldSpec& m, std::vector<PathSample> samples);
Path constant_path(const Point& p);
Path path_through_points(const ManifoldSpec& m, const std::vector<Point>& pts);

double wrap_angle(double a);       // to [0, 2pi)
double principal_angle(double a);  // to (-pi, pi], ties mapped to +pi

Point exp_map(const Point& x, const TangentVector& v, double t);
double riemannian_distance(const Point& x, const Point& y);
MinimizingGeodesics minimizing_geodesics(const Point& x, const Point& y);
Path concatenate_paths(const Path& a, const Path& b);
Path reverse_path(const Path& a);

double path_length(const Path& p);
Point path_eval(const Path& p, double t);
Path resample_path(const Path& p, int samples);
Path geodesic_path(const GeodesicSegment& seg, int samples);
double sup_path_distance(const Path& a, const Path& b, int grid = 128);

std::vector<TangentVector> tangent_basis(const Point& x);
Point uniform_sample(const ManifoldSpec& m, Rng& rng);
TangentVector random_unit_tangent(const Point& x, Rng& rng);

// Pair view of M x M: Product([A, A]) or Torus(2n) split into halves.
bool is_pair_manifold(const ManifoldSpec& m);
ManifoldSpec pair_half(const ManifoldSpec& m);
Point pair_first(const Point& p);
Point pair_second(const Point& p);
Point make_pair_point(const Point& a, const Point& b);

// Product coordinate slicing.
std::vector<std::pair<int, int>> factor_slices(const ManifoldSpec& m);  // (offset, length)
Point factor_point(const Point& p, int factor);
Point combine_factor_points(const ManifoldSpec& m, const std::vector<Point>& parts);

Point antipode(const Point& p);  // Sphere only

}  // namespace navplan
