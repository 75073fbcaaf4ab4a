#include "fockgen/pulse.hpp"

#include <algorithm>
#include <cmath>

#include "fockgen/errors.hpp"

namespace fockgen {

std::string to_string(PulseKind kind) {
    switch (kind) {
        case PulseKind::linear: return "linear";
        case PulseKind::gaussian: return "gaussian";
        case PulseKind::constant: return "constant";
        case PulseKind::piecewise_linear: return "piecewise";
    }
    return "unknown";
}

PulseKind parse_pulse_kind(const std::string& name) {
    if (name == "linear") return PulseKind::linear;
    if (name == "gaussian") return PulseKind::gaussian;
    if (name == "constant") return PulseKind::constant;
    if (name == "piecewise" || name == "piecewise-linear") return PulseKind::piecewise_linear;
    throw InvalidArgument("unknown pulse type '" + name + "'");
}

PulseSchedule PulseSchedule::linear(double rate, std::optional<double> cap) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw InvalidArgument("linear pulse: rate must be finite and >= 0");
    }
    if (cap && !(*cap > 0.0)) {
        throw InvalidArgument("linear pulse: cap must be > 0");
    }
    PulseSchedule s;
    s.kind_ = PulseKind::linear;
    s.rate_ = rate;
    s.cap_ = cap;
    return s;
}

PulseSchedule PulseSchedule::gaussian(double peak, double t0, double tau) {
    if (!(peak >= 0.0) || !(tau > 0.0) || !std::isfinite(t0)) {
        throw InvalidArgument("gaussian pulse: need peak >= 0, tau > 0, finite t0");
    }
    PulseSchedule s;
    s.kind_ = PulseKind::gaussian;
    s.peak_ = peak;
    s.t0_ = t0;
    s.tau_ = tau;
    return s;
}

PulseSchedule PulseSchedule::constant(double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw InvalidArgument("constant pulse: value must be finite and >= 0");
    }
    PulseSchedule s;
    s.kind_ = PulseKind::constant;
    s.peak_ = value;
    return s;
}

PulseSchedule PulseSchedule::piecewise(std::vector<Knot> knots) {
    if (knots.empty()) {
        throw InvalidArgument("piecewise pulse: at least one knot required");
    }
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!(knots[i].r >= 0.0) || !std::isfinite(knots[i].t)) {
            throw InvalidArgument("piecewise pulse: knot values must be >= 0");
        }
        if (i > 0 && !(knots[i].t > knots[i - 1].t)) {
            throw InvalidArgument("piecewise pulse: knot times must be strictly increasing");
        }
    }
    PulseSchedule s;
    s.kind_ = PulseKind::piecewise_linear;
    s.knots_ = std::move(knots);
    return s;
}

double PulseSchedule::value(double t) const {
    if (t < 0.0) {
        throw InvalidArgument("pulse value: t must be >= 0");
    }
    switch (kind_) {
        case PulseKind::linear: {
            const double r = rate_ * t;
            return cap_ ? std::min(r, *cap_) : r;
        }
        case PulseKind::gaussian: {
            const double u = (t - t0_) / tau_;
            return peak_ * std::exp(-0.5 * u * u);
        }
        case PulseKind::constant: return peak_;
        case PulseKind::piecewise_linear: {
            if (t <= knots_.front().t) return knots_.front().r;
            if (t >= knots_.back().t) return knots_.back().r;
            auto hi = std::upper_bound(knots_.begin(), knots_.end(), t,
                                       [](double v, const Knot& k) { return v < k.t; });
            auto lo = hi - 1;
            const double f = (t - lo->t) / (hi->t - lo->t);
            return lo->r + f * (hi->r - lo->r);
        }
    }
    return 0.0;
}

double PulseSchedule::derivative(double t) const {
    if (t < 0.0) {
        throw InvalidArgument("pulse derivative: t must be >= 0");
    }
    switch (kind_) {
        case PulseKind::linear:
            if (cap_ && rate_ * t >= *cap_) return 0.0;
            return rate_;
        case PulseKind::gaussian: {
            const double u = (t - t0_) / tau_;
            return -peak_ * u / tau_ * std::exp(-0.5 * u * u);
        }
        case PulseKind::constant: return 0.0;
        case PulseKind::piecewise_linear: {
            if (t < knots_.front().t || t >= knots_.back().t) return 0.0;
            auto hi = std::upper_bound(knots_.begin(), knots_.end(), t,
                                       [](double v, const Knot& k) { return v < k.t; });
            auto lo = hi - 1;
            return (hi->r - lo->r) / (hi->t - lo->t);
        }
    }
    return 0.0;
}

double PulseSchedule::max_derivative() const {
    switch (kind_) {
        case PulseKind::linear: return rate_;
        case PulseKind::gaussian: return peak_ / tau_ * std::exp(-0.5);  // at t0 +- tau
        case PulseKind::constant: return 0.0;
        case PulseKind::piecewise_linear: {
            double best = 0.0;
            for (std::size_t i = 1; i < knots_.size(); ++i) {
                best = std::max(best, std::abs(knots_[i].r - knots_[i - 1].r) /
                                          (knots_[i].t - knots_[i - 1].t));
            }
            return best;
        }
    }
    return 0.0;
}

double PulseSchedule::settle_time() const noexcept {
    switch (kind_) {
        case PulseKind::gaussian: return std::max(0.0, t0_);
        case PulseKind::piecewise_linear: return std::max(0.0, knots_.back().t);
        default: return 0.0;
    }
}

PulseSchedule PulseSchedule::scaled(double factor) const {
    PulseSchedule s = *this;
    s.rate_ *= factor;
    s.peak_ *= factor;
    if (s.cap_) *s.cap_ *= factor;
    for (auto& k : s.knots_) k.r *= factor;
    return s;
}

}  // namespace fockgen
