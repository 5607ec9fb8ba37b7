#include "qtsp/instances.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "qtsp/errors.hpp"
#include "qtsp/format.hpp"
#include "qtsp/rng.hpp"

namespace qtsp {

namespace {

bool is_permutation_of_n(std::span<const int> order, int n) {
    if (static_cast<int>(order.size()) != n) return false;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int v : order) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
        seen[static_cast<std::size_t>(v)] = 1;
    }
    return true;
}

}  // namespace

TspInstance::TspInstance(std::string name, std::vector<Point2> cities)
    : name_(std::move(name)), cities_(std::move(cities)) {
    if (cities_.size() < 3) throw std::invalid_argument("TspInstance: need at least 3 cities");
    for (const Point2& p : cities_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("TspInstance: non-finite coordinate");
    }
    for (std::size_t i = 0; i < cities_.size(); ++i) {
        for (std::size_t j = i + 1; j < cities_.size(); ++j) {
            if (cities_[i].x == cities_[j].x && cities_[i].y == cities_[j].y)
                throw std::invalid_argument("TspInstance: duplicate city coordinates at indices " +
                                            std::to_string(i) + " and " + std::to_string(j));
        }
    }
}

UnitTransform TspInstance::unit_transform() const {
    double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
    double max_x = -min_x, max_y = -min_x;
    for (const Point2& p : cities_) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double extent = std::max(max_x - min_x, max_y - min_y);
    return {min_x, min_y, extent > 0.0 ? 1.0 / extent : 1.0};
}

TspInstance TspInstance::normalized() const {
    const UnitTransform tf = unit_transform();
    std::vector<Point2> unit;
    unit.reserve(cities_.size());
    for (const Point2& p : cities_) unit.push_back(tf.to_unit(p));
    return TspInstance(name_, std::move(unit));
}

TspInstance random_euclidean(int n, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("random_euclidean: n must be >= 3");
    Rng rng = Rng::derive(seed, 0x7501);
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(), rng.uniform()});
    return TspInstance("random-n" + std::to_string(n) + "-s" + std::to_string(seed), std::move(pts));
}

double tour_length(const TspInstance& inst, std::span<const int> order) {
    if (!is_permutation_of_n(order, inst.n()))
        throw InvalidTour("tour_length: order is not a permutation of 0.." +
                          std::to_string(inst.n() - 1));
    double total = 0.0;
    const std::size_t n = order.size();
    for (std::size_t i = 0; i < n; ++i) {
        total += dist(inst.city(order[i]), inst.city(order[(i + 1) % n]));
    }
    return total;
}

bool validate_tour(const TspInstance& inst, std::span<const int> order) {
    return is_permutation_of_n(order, inst.n());
}

Tour brute_force_optimal(const TspInstance& inst) {
    const int n = inst.n();
    if (n > 11)
        throw InstanceTooLarge("brute_force_optimal: n=" + std::to_string(n) + " exceeds cap 11");

    std::vector<int> rest(static_cast<std::size_t>(n - 1));
    std::iota(rest.begin(), rest.end(), 1);

    std::vector<int> best_order;
    double best_len = std::numeric_limits<double>::infinity();
    std::vector<int> order(static_cast<std::size_t>(n));
    order[0] = 0;
    do {
        // canonical representative only: second city below last
        if (rest.front() > rest.back()) continue;
        std::copy(rest.begin(), rest.end(), order.begin() + 1);
        double len = 0.0;
        for (int i = 0; i < n; ++i) len += dist(inst.city(order[i]), inst.city(order[(i + 1) % n]));
        if (len < best_len) {
            best_len = len;
            best_order = order;
        }
    } while (std::next_permutation(rest.begin(), rest.end()));

    return Tour{std::move(best_order), best_len};
}

std::uint64_t tour_count(int n) {
    if (n < 3 || n > 20) throw std::invalid_argument("tour_count: n must be in [3, 20]");
    std::uint64_t fact = 1;
    for (int i = 2; i <= n - 1; ++i) fact *= static_cast<std::uint64_t>(i);
    return fact / 2;
}

namespace {

// "KEY : value" with whitespace tolerated around the colon.
bool split_header(const std::string& line, std::string& key, std::string& value) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) return false;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        return s.substr(b, e - b + 1);
    };
    key = trim(line.substr(0, colon));
    value = trim(line.substr(colon + 1));
    return !key.empty();
}

}  // namespace

TspInstance parse_tsplib(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    std::string name = "unnamed";
    int dimension = -1;
    bool have_weight_type = false;
    bool in_coords = false;
    std::vector<Point2> pts;
    std::vector<char> filled;

    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        if (!in_coords) {
            std::string key, value;
            if (split_header(line, key, value)) {
                if (key == "NAME") {
                    name = value;
                } else if (key == "TYPE") {
                    if (value != "TSP") throw ParseError("unsupported TYPE '" + value + "'", line_no);
                } else if (key == "DIMENSION") {
                    try {
                        dimension = std::stoi(value);
                    } catch (const std::exception&) {
                        throw ParseError("bad DIMENSION value '" + value + "'", line_no);
                    }
                    if (dimension < 3) throw ParseError("DIMENSION must be >= 3", line_no);
                } else if (key == "EDGE_WEIGHT_TYPE") {
                    if (value != "EUC_2D")
                        throw ParseError("unsupported EDGE_WEIGHT_TYPE '" + value + "'", line_no);
                    have_weight_type = true;
                } else if (key == "COMMENT") {
                    // ignored
                } else {
                    throw ParseError("unknown header key '" + key + "'", line_no);
                }
                continue;
            }
            if (line == "NODE_COORD_SECTION") {
                if (dimension < 0) throw ParseError("missing DIMENSION before NODE_COORD_SECTION", line_no);
                if (!have_weight_type)
                    throw ParseError("missing EDGE_WEIGHT_TYPE before NODE_COORD_SECTION", line_no);
                pts.assign(static_cast<std::size_t>(dimension), Point2{});
                filled.assign(static_cast<std::size_t>(dimension), 0);
                in_coords = true;
                continue;
            }
            throw ParseError("unexpected line '" + line + "'", line_no);
        }

        if (line == "EOF") {
            in_coords = false;
            break;
        }
        std::istringstream row(line);
        long idx;
        double x, y;
        if (!(row >> idx >> x >> y)) throw ParseError("malformed coordinate line '" + line + "'", line_no);
        std::string extra;
        if (row >> extra) throw ParseError("trailing token '" + extra + "' on coordinate line", line_no);
        if (idx < 1 || idx > dimension)
            throw ParseError("node index " + std::to_string(idx) + " out of range", line_no);
        if (filled[static_cast<std::size_t>(idx - 1)])
            throw ParseError("duplicate node index " + std::to_string(idx), line_no);
        pts[static_cast<std::size_t>(idx - 1)] = {x, y};
        filled[static_cast<std::size_t>(idx - 1)] = 1;
    }

    if (dimension < 0) throw ParseError("missing DIMENSION header", line_no);
    if (pts.empty()) throw ParseError("missing NODE_COORD_SECTION", line_no);
    for (std::size_t i = 0; i < filled.size(); ++i) {
        if (!filled[i])
            throw ParseError("missing coordinates for node " + std::to_string(i + 1), line_no);
    }
    return TspInstance(name, std::move(pts));
}

std::string write_tsplib(const TspInstance& inst) {
    std::string out;
    out += "NAME : " + inst.name() + "\n";
    out += "TYPE : TSP\n";
    out += "DIMENSION : " + std::to_string(inst.n()) + "\n";
    out += "EDGE_WEIGHT_TYPE : EUC_2D\n";
    out += "NODE_COORD_SECTION\n";
    for (int i = 0; i < inst.n(); ++i) {
        const Point2 p = inst.city(i);
        out += std::to_string(i + 1) + " " + fmt_double(p.x) + " " + fmt_double(p.y) + "\n";
    }
    out += "EOF\n";
    return out;
}

std::string write_tour(const Tour& tour, const std::string& name) {
    std::string out;
    out += "NAME : " + name + "\n";
    out += "TYPE : TOUR\n";
    out += "DIMENSION : " + std::to_string(tour.order.size()) + "\n";
    out += "TOUR_SECTION\n";
    for (int v : tour.order) out += std::to_string(v + 1) + "\n";
    out += "-1\n";
    out += "EOF\n";
    return out;
}

std::vector<int> parse_tour(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    int dimension = -1;
    bool in_section = false;
    bool terminated = false;
    std::vector<int> order;

    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        if (!in_section) {
            std::string key, value;
            if (split_header(line, key, value)) {
                if (key == "TYPE" && value != "TOUR")
                    throw ParseError("unsupported TYPE '" + value + "'", line_no);
                if (key == "DIMENSION") {
                    try {
                        dimension = std::stoi(value);
                    } catch (const std::exception&) {
                        throw ParseError("bad DIMENSION value '" + value + "'", line_no);
                    }
                }
                continue;
            }
            if (line == "TOUR_SECTION") {
                in_section = true;
                continue;
            }
            throw ParseError("unexpected line '" + line + "'", line_no);
        }
        if (line == "EOF") break;
        std::istringstream row(line);
        long v;
        while (row >> v) {
            if (v == -1) {
                terminated = true;
                break;
            }
            if (v < 1) throw ParseError("tour indices are 1-based", line_no);
            order.push_back(static_cast<int>(v - 1));
        }
        if (terminated) break;  // anything after -1 (e.g. EOF) is ignored
    }
    if (!terminated) throw ParseError("missing -1 terminator in TOUR_SECTION", line_no);
    if (dimension >= 0 && static_cast<int>(order.size()) != dimension)
        throw ParseError("tour has " + std::to_string(order.size()) + " entries, DIMENSION says " +
                             std::to_string(dimension),
                         line_no);
    return order;
}

}  // namespace qtsp
