// pulse.hpp - pump drive profiles r(t) with analytic derivatives.

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace fockgen {

enum class PulseKind { linear, gaussian, constant, piecewise_linear };

[[nodiscard]] std::string to_string(PulseKind kind);
// Accepts "linear", "gaussian", "constant", "piecewise"; throws InvalidArgument otherwise.
[[nodiscard]] PulseKind parse_pulse_kind(const std::string& name);

struct Knot {
    double t{0.0};
    double r{0.0};
};

class PulseSchedule {
  public:
    // r(t) = min(rate * t, cap)
    static PulseSchedule linear(double rate, std::optional<double> cap = std::nullopt);
    // r(t) = peak * exp(-(t - t0)^2 / (2 tau^2))
    static PulseSchedule gaussian(double peak, double t0, double tau);
    static PulseSchedule constant(double value);
    // Linear interpolation between knots, held flat outside them.
    static PulseSchedule piecewise(std::vector<Knot> knots);

    [[nodiscard]] PulseKind kind() const noexcept { return kind_; }
    [[nodiscard]] double rate() const noexcept { return rate_; }
    [[nodiscard]] double peak() const noexcept { return peak_; }
    [[nodiscard]] double t0() const noexcept { return t0_; }
    [[nodiscard]] double tau() const noexcept { return tau_; }
    [[nodiscard]] std::optional<double> cap() const noexcept { return cap_; }
    [[nodiscard]] const std::vector<Knot>& knots() const noexcept { return knots_; }

    [[nodiscard]] double value(double t) const;
    // Exact derivative; right-sided at piecewise knots and at the cap onset.
    [[nodiscard]] double derivative(double t) const;
    [[nodiscard]] double max_derivative() const;
    // Time before which a flux-based stop rule must not fire (pulse peak or last knot).
    [[nodiscard]] double settle_time() const noexcept;

    // Copy with every rate-like field multiplied by `factor` (slope for
    // linear ramps, amplitude otherwise).
    [[nodiscard]] PulseSchedule scaled(double factor) const;

  private:
    PulseSchedule() = default;

    PulseKind kind_{PulseKind::linear};
    double rate_{0.0};
    double peak_{0.0};
    double t0_{0.0};
    double tau_{1.0};
    std::optional<double> cap_;
    std::vector<Knot> knots_;
};

}  // namespace fockgen
