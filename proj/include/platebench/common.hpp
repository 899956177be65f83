#pragma once

#include <stdexcept>
#include <string>

namespace platebench {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed configuration or setting files.
struct ConfigError : Error {
    using Error::Error;
};

// Corrupt, truncated or inconsistent datasets.
struct DataError : Error {
    using Error::Error;
};

// Direct solver failure; carries the offending excitation frequency when known.
struct SolverError : Error {
    explicit SolverError(const std::string& what, double frequency_hz = 0.0)
        : Error(what), frequency_hz(frequency_hz) {}
    double frequency_hz;
};

struct GridDims {
    int ny = 0;
    int nx = 0;

    bool operator==(const GridDims&) const = default;
    long cell_count() const { return static_cast<long>(ny) * nx; }
};

// Closed real interval [lo, hi]. Point intervals (lo == hi) model fixed parameters.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const { return v >= lo && v <= hi; }
    bool is_point() const { return lo == hi; }
    double width() const { return hi - lo; }
};

struct IntInterval {
    int lo = 0;
    int hi = 0;

    bool contains(int v) const { return v >= lo && v <= hi; }
};

}  // namespace platebench
