#include "hml/units.hpp"

#include "hml/errors.hpp"

#include <cmath>
#include <string>

namespace hml {

namespace {
void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw domain_error(std::string("material parameter ") + name + " must be finite and > 0");
    }
}
} // namespace

void validate(const MaterialParams& mat) {
    require_positive(mat.gamma0, "gamma0");
    require_positive(mat.gammaq, "gammaq");
    require_positive(mat.Ms, "Ms");
    require_positive(mat.ka, "ka");
    require_positive(mat.DeltaNV, "DeltaNV");
}

void validate(const FieldBias& field) {
    if (!(field.B0 >= 0.0) || !std::isfinite(field.B0)) {
        throw domain_error("bias field B0 must be finite and >= 0");
    }
}

MaterialParams yig_preset() {
    MaterialParams m;
    m.gamma0 = 1.76199e11;
    m.gammaq = 1.76149e11;
    m.Ms = 196.0e3;
    m.ka = 2480.0;
    m.DeltaNV = 2.0 * constants::pi * 2.87e9;
    return m;
}

MagnetMoment magnet_moment(double R, const MaterialParams& mat) {
    if (!(R > 0.0) || !std::isfinite(R)) {
        throw domain_error("magnet radius must be > 0");
    }
    validate(mat);
    MagnetMoment m;
    m.mu = mat.Ms * (4.0 * constants::pi / 3.0) * R * R * R;
    m.F = m.mu / (constants::hbar * mat.gamma0);
    return m;
}

} // namespace hml
