#pragma once

#include <ostream>

namespace qtherm {

// Extended real with tagged ±∞ — never a floating-point sentinel.
// Used for relative entropies (−∞ on support failure) and classical
// divergences (+∞ on absolute-continuity failure).
class ExtReal {
public:
    static ExtReal finite(double v) { return ExtReal(v, 0); }
    static ExtReal minus_inf() { return ExtReal(0.0, -1); }
    static ExtReal plus_inf() { return ExtReal(0.0, +1); }

    bool is_finite() const { return tag_ == 0; }
    bool is_minus_inf() const { return tag_ < 0; }
    bool is_plus_inf() const { return tag_ > 0; }

    // Only meaningful when finite.
    double value() const { return v_; }

private:
    ExtReal(double v, int tag) : v_(v), tag_(tag) {}
    double v_;
    int tag_;
};

inline std::ostream& operator<<(std::ostream& os, const ExtReal& x)
{
    if (x.is_minus_inf()) return os << "-inf";
    if (x.is_plus_inf()) return os << "+inf";
    return os << x.value();
}

} // namespace qtherm
