// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>

namespace envsamp {

/// RGB radiance sample. Channels are nonnegative and finite for every value
/// produced by this library.
struct Spectrum {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    static Spectrum gray(double value) { return {value, value, value}; }

    double channel_sum() const { return r + g + b; }

    // Rec. 709 luma weights, the measure used by Mitsuba and pbrt.
    double luminance() const { return 0.2126 * r + 0.7152 * g + 0.0722 * b; }

    double max_channel() const { return std::max(r, std::max(g, b)); }

    bool is_finite() const {
        return std::isfinite(r) && std::isfinite(g) && std::isfinite(b);
    }

    Spectrum& operator+=(const Spectrum& o) {
        r += o.r;
        g += o.g;
        b += o.b;
        return *this;
    }

    Spectrum& operator-=(const Spectrum& o) {
        r -= o.r;
        g -= o.g;
        b -= o.b;
        return *this;
    }

    Spectrum& operator*=(double s) {
        r *= s;
        g *= s;
        b *= s;
        return *this;
    }

    friend Spectrum operator+(Spectrum a, const Spectrum& b) { return a += b; }
    friend Spectrum operator-(Spectrum a, const Spectrum& b) { return a -= b; }
    friend Spectrum operator*(Spectrum a, double s) { return a *= s; }
    friend Spectrum operator*(double s, Spectrum a) { return a *= s; }
    friend bool operator==(const Spectrum& a, const Spectrum& b) {
        return a.r == b.r && a.g == b.g && a.b == b.b;
    }
};

inline Spectrum lerp(const Spectrum& a, const Spectrum& b, double t) {
    return a * (1.0 - t) + b * t;
}

}  // namespace envsamp
