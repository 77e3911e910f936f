#include "gsmab/signal.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace gsmab {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        throw std::domain_error(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
}

}  // namespace

GraphSignal::GraphSignal(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_)
        if (!std::isfinite(v)) throw std::domain_error("graph signal entries must be finite");
}

GraphSignal realize(const ClusteredSignalSpec& spec) {
    const auto& part = spec.partition;
    if (spec.coefficients.size() != part.cluster_count())
        throw std::domain_error("realize: expected " + std::to_string(part.cluster_count()) + " coefficients, got " +
                                std::to_string(spec.coefficients.size()));
    std::vector<double> x(part.node_count());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = spec.coefficients[part.cluster_of(static_cast<NodeId>(i))];
    return GraphSignal(std::move(x));
}

std::vector<double> ascending_coefficients(std::size_t cluster_count) {
    std::vector<double> a(cluster_count);
    for (std::size_t l = 0; l < cluster_count; ++l) a[l] = static_cast<double>(l + 1);
    return a;
}

double total_variation(const Graph& g, std::span<const double> x) {
    require_same_length(x.size(), g.node_count(), "total_variation");
    double tv = 0.0;
    for (const auto& [i, j] : g.edges()) tv += std::abs(x[j] - x[i]);
    return tv;
}

double mse(const GraphSignal& x, const GraphSignal& y) {
    require_same_length(x.size(), y.size(), "mse");
    if (x.size() == 0) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x.values()[i] - y.values()[i];
        acc += d * d;
    }
    return acc / static_cast<double>(x.size());
}

double nmse(const GraphSignal& truth, const GraphSignal& estimate) {
    require_same_length(truth.size(), estimate.size(), "nmse");
    double err = 0.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double t = truth.values()[i];
        const double d = estimate.values()[i] - t;
        err += d * d;
        norm += t * t;
    }
    if (norm == 0.0) throw std::domain_error("nmse: truth signal has zero norm");
    return err / norm;
}

Decibels to_db(double ratio, double floor_db) {
    if (!(ratio > 0.0)) return {floor_db, true};
    const double db = 10.0 * std::log10(ratio);
    if (db < floor_db) return {floor_db, true};
    return {db, false};
}

void write_signal(std::ostream& os, const GraphSignal& x) {
    char buf[32];
    for (double v : x.values()) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf << '\n';
    }
}

GraphSignal read_signal(std::istream& is) {
    std::vector<double> values;
    std::string token;
    while (is >> token) {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw std::runtime_error("signal file: bad value '" + token + "'");
        values.push_back(v);
    }
    return GraphSignal(std::move(values));
}

}  // namespace gsmab
