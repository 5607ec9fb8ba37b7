#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qtsp {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline double dist(Point2 a, Point2 b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

inline double dist2(Point2 a, Point2 b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// Aspect-preserving affine map between instance coordinates and [0,1]^2.
struct UnitTransform {
    double offset_x = 0.0;
    double offset_y = 0.0;
    double scale = 1.0;

    Point2 to_unit(Point2 p) const { return {(p.x - offset_x) * scale, (p.y - offset_y) * scale}; }
    Point2 from_unit(Point2 p) const { return {p.x / scale + offset_x, p.y / scale + offset_y}; }
};

// Euclidean TSP instance. Coordinates are kept exactly as constructed (the
// generator emits unit-square points; the TSPLIB reader keeps file values).
// `normalized()` gives a unit-square copy for solvers whose defaults assume
// unit scale; permutations are unaffected by that affine map.
class TspInstance {
public:
    TspInstance(std::string name, std::vector<Point2> cities);

    const std::string& name() const { return name_; }
    const std::vector<Point2>& cities() const { return cities_; }
    int n() const { return static_cast<int>(cities_.size()); }
    Point2 city(int i) const { return cities_[static_cast<std::size_t>(i)]; }

    // Aspect-preserving affine map into [0,1]^2, and the transform behind it
    // (useful to map solver output back into instance coordinates).
    TspInstance normalized() const;
    UnitTransform unit_transform() const;

private:
    std::string name_;
    std::vector<Point2> cities_;
};

struct Tour {
    std::vector<int> order;
    double length = 0.0;
};

// n uniform points in the unit square; deterministic per seed.
TspInstance random_euclidean(int n, std::uint64_t seed);

// Closed-tour Euclidean length; throws InvalidTour unless `order` is a
// permutation of 0..n-1.
double tour_length(const TspInstance& inst, std::span<const int> order);

bool validate_tour(const TspInstance& inst, std::span<const int> order);

// Exhaustive optimum over all (n-1)!/2 closed tours, n <= 11. Ties resolved
// toward the lexicographically smallest canonical order (city 0 first,
// second city below last).
Tour brute_force_optimal(const TspInstance& inst);

// Exact count of distinct closed tours, (n-1)!/2, for 3 <= n <= 20.
std::uint64_t tour_count(int n);

// TSPLIB subset: NAME/TYPE/DIMENSION/EDGE_WEIGHT_TYPE=EUC_2D header,
// NODE_COORD_SECTION, EOF. Coordinates are read verbatim.
TspInstance parse_tsplib(const std::string& text);
std::string write_tsplib(const TspInstance& inst);

// Tour files: TYPE : TOUR, TOUR_SECTION with 1-based indices, -1, EOF.
std::string write_tour(const Tour& tour, const std::string& name = "tour");
std::vector<int> parse_tour(const std::string& text);

}  // namespace qtsp
