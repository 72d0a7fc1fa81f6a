#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace oes {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Library-wide error with a machine-readable kind. The CLI maps kinds to
// exit codes; tests match on kind rather than message text.
class Error : public std::runtime_error {
  public:
    enum class Kind {
        Parse,
        InvalidScenario,
        InvalidModel,
        Structural,
        Infeasible,
        InfeasibleLink,
        OracleTooLarge,
        UndefinedMetric,
        Io,
    };

    Error(Kind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

[[noreturn]] inline void fail(Error::Kind kind, const std::string& msg) {
    throw Error(kind, msg);
}

// Decimal formatting policy for every emitted file: integers exact,
// doubles with 12 significant digits (re-parses within 1e-9 relative).
inline std::string fmt_f64(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string fmt_i64(long long v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld", v);
    return buf;
}

// Dense row-major matrix, just enough for channel gains and shadow samples.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const Matrix& other) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

}  // namespace oes
