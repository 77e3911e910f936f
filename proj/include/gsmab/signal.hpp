// signal.hpp — graph signals, the piecewise-constant cluster model, and error metrics.
#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "gsmab/graph.hpp"

namespace gsmab {

// One real value per node; entries must be finite.
class GraphSignal {
public:
    GraphSignal() = default;
    explicit GraphSignal(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](NodeId i) const { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }

    bool operator==(const GraphSignal&) const = default;

private:
    std::vector<double> values_;
};

struct ClusteredSignalSpec {
    Partition partition;
    std::vector<double> coefficients;  // one per cluster
};

// x[i] = a_C for the cluster C containing i.
GraphSignal realize(const ClusteredSignalSpec& spec);

// Coefficients 1, 2, ..., K in cluster order.
std::vector<double> ascending_coefficients(std::size_t cluster_count);

double total_variation(const Graph& g, std::span<const double> x);
inline double total_variation(const Graph& g, const GraphSignal& x) { return total_variation(g, x.values()); }

double mse(const GraphSignal& x, const GraphSignal& y);

// ||estimate - truth||^2 / ||truth||^2. Throws on an all-zero truth.
double nmse(const GraphSignal& truth, const GraphSignal& estimate);

struct Decibels {
    double value;
    bool clamped;  // input was <= 0 or fell below the floor
};

inline constexpr double kDefaultDbFloor = -120.0;

// 10*log10(ratio), clamped to `floor_db` for non-positive or tiny ratios.
Decibels to_db(double ratio, double floor_db = kDefaultDbFloor);

// One value per line, 17 significant digits.
void write_signal(std::ostream& os, const GraphSignal& x);
GraphSignal read_signal(std::istream& is);

}  // namespace gsmab
