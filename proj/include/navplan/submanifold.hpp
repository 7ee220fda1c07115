#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "navplan/manifold.hpp"

namespace navplan {

inline constexpr double kMemberTol = 1e-6;  // default membership tolerance

enum class SubmanifoldKind { SinglePoint, Diagonal, Subtorus, AntipodalGraph, Custom };

// Closed submanifold of a catalog manifold with an exact nearest-point
// projection. Diagonal lives in a pair manifold M x M and may carry a
// translation offset on torus pairs ({(a, b) : a - b = offset}).
class SubmanifoldSpec {
 public:
  static SubmanifoldSpec single_point(Point p);
  static SubmanifoldSpec diagonal(const ManifoldSpec& ambient);
  static SubmanifoldSpec diagonal(const ManifoldSpec& ambient, std::vector<double> offset);
  static SubmanifoldSpec subtorus(const ManifoldSpec& ambient,
                                  std::vector<std::pair<int, double>> fixed_coords);
  static SubmanifoldSpec antipodal_graph(const ManifoldSpec& ambient);
  static SubmanifoldSpec custom(const ManifoldSpec& ambient, std::string label, int dimension,
                                std::function<Point(const Point&)> project,
                                std::function<Point(Rng&)> sample);

  SubmanifoldKind kind() const { return kind_; }
  const ManifoldSpec& ambient() const { return ambient_; }
  int dimension() const { return dimension_; }
  const std::string& label() const { return label_; }
  const Point& point() const;                          // SinglePoint
  const std::vector<double>& offset() const { return offset_; }  // Diagonal
  const std::vector<std::pair<int, double>>& fixed_coords() const { return fixed_; }

  friend struct FootResult;
  friend FootResult distance_to_submanifold(const Point&, const SubmanifoldSpec&);
  friend Point sample_submanifold(const SubmanifoldSpec&, Rng&);
  friend MinimizingGeodesics n_segments(const Point&, const SubmanifoldSpec&);

 private:
  explicit SubmanifoldSpec(const ManifoldSpec& ambient)
      : kind_(SubmanifoldKind::Custom), ambient_(ambient) {}
  SubmanifoldKind kind_;
  ManifoldSpec ambient_;
  int dimension_ = 0;
  std::string label_;
  std::optional<Point> point_;
  std::vector<double> offset_;
  std::vector<std::pair<int, double>> fixed_;
  std::function<Point(const Point&)> project_;
  std::function<Point(Rng&)> sample_;
};

struct FootResult {
  double distance = 0.0;
  Point foot;
};

FootResult distance_to_submanifold(const Point& y, const SubmanifoldSpec& n);
Point project_to_submanifold(const Point& y, const SubmanifoldSpec& n);
bool submanifold_contains(const SubmanifoldSpec& n, const Point& y, double tol = kMemberTol);
Point sample_submanifold(const SubmanifoldSpec& n, Rng& rng);

// All minimizing geodesics from N to y (each segment starts at its foot
// point on N). Mirrors the continuum convention of minimizing_geodesics.
MinimizingGeodesics n_segments(const Point& y, const SubmanifoldSpec& n);

struct CutLocusDescriptor {
  ManifoldSpec ambient;
  std::vector<SubmanifoldSpec> pieces;
  bool analytic = false;
  bool supported = true;
};

// Catalog table: sphere/point, projective space/point, torus/point,
// product/point (factorwise), sphere pair/diagonal. Unsupported pairs come
// back with supported = false so callers can fall back to detection.
CutLocusDescriptor cut_locus_analytic(const ManifoldSpec& m, const SubmanifoldSpec& n);

double distance_to_cut(const Point& y, const CutLocusDescriptor& cut);

struct GridSpec {
  int per_dim = 200;
};

std::vector<Point> sample_grid(const ManifoldSpec& m, const GridSpec& grid);
std::vector<Point> detect_separation_points(const ManifoldSpec& m, const SubmanifoldSpec& n,
                                            const GridSpec& grid);
double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b);

}  // namespace navplan
