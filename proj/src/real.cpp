#include "crn/real.hpp"

#include <cstdio>
#include <vector>

namespace crn {

std::string Real::to_string(int digits) const {
    if (digits < 2) digits = 2;
    if (!mpfr_number_p(v_)) return mpfr_nan_p(v_) ? "nan" : (mpfr_sgn(v_) > 0 ? "inf" : "-inf");
    if (mpfr_zero_p(v_)) return "0";
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
    std::string mant(s);
    mpfr_free_str(s);
    bool neg = !mant.empty() && mant[0] == '-';
    std::string d = neg ? mant.substr(1) : mant;
    // strip trailing zeros but keep at least one digit
    size_t last = d.find_last_not_of('0');
    d = d.substr(0, last == std::string::npos ? 1 : last + 1);
    std::string out;
    // e is the decimal exponent: value = 0.d * 10^e
    if (e > 0 && e <= static_cast<mpfr_exp_t>(d.size()) + 6) {
        if (static_cast<size_t>(e) >= d.size())
            out = d + std::string(static_cast<size_t>(e) - d.size(), '0');
        else
            out = d.substr(0, static_cast<size_t>(e)) + "." + d.substr(static_cast<size_t>(e));
    } else if (e <= 0 && e > -6) {
        out = "0." + std::string(static_cast<size_t>(-e), '0') + d;
    } else {
        out = d.substr(0, 1);
        if (d.size() > 1) out += "." + d.substr(1);
        out += "e" + std::to_string(static_cast<long long>(e - 1));
    }
    return neg ? "-" + out : out;
}

}  // namespace crn
