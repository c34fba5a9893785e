#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "bitsampler/errors.hpp"

namespace bitsampler {

// Closed interval on the real line.
struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double length() const noexcept { return hi - lo; }
    double mid() const noexcept { return lo + 0.5 * (hi - lo); }
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    bool contains(const Interval& other) const noexcept {
        return lo <= other.lo && other.hi <= hi;
    }
};

// Axis-aligned box: a product of closed intervals, one per coordinate.
struct Box {
    std::vector<Interval> axes;

    Box() = default;
    Box(std::initializer_list<Interval> list) : axes(list) {}
    explicit Box(std::vector<Interval> a) : axes(std::move(a)) {}

    static Box unit_cube(int d) {
        if (d < 1) throw validation_error("box dimension must be positive");
        return Box(std::vector<Interval>(static_cast<std::size_t>(d), Interval{0.0, 1.0}));
    }

    int dimension() const noexcept { return static_cast<int>(axes.size()); }

    double volume() const noexcept {
        double v = 1.0;
        for (const auto& ax : axes) v *= ax.length();
        return v;
    }

    bool contains(const Box& other) const noexcept {
        if (axes.size() != other.axes.size()) return false;
        for (std::size_t i = 0; i < axes.size(); ++i)
            if (!axes[i].contains(other.axes[i])) return false;
        return true;
    }

    bool contains(const std::vector<double>& x) const noexcept {
        if (x.size() != axes.size()) return false;
        for (std::size_t i = 0; i < axes.size(); ++i)
            if (!axes[i].contains(x[i])) return false;
        return true;
    }
};

} // namespace bitsampler
