#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "djsim/errors.hpp"

namespace djsim {

using Complex = std::complex<double>;

enum class GateId { I, X, Y, Z, H, S, Sdg, Ry, Rz, Cnot };

/// A unitary matrix with a symbolic name. Library gates are 2x2 except CNOT
/// (4x4, basis index = 2*control + target, control being the left ket symbol).
/// Tensor products grow `dim` beyond 4.
struct GateMatrix {
    std::string name;
    int dim = 2;
    std::vector<Complex> entries;  // row-major, dim*dim
    std::optional<double> param;   // angle, Ry/Rz only

    Complex at(int row, int col) const { return entries[static_cast<std::size_t>(row) * dim + col]; }

    /// Max-entry deviation of U†U from the identity.
    double unitarity_error() const {
        double worst = 0.0;
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                Complex acc{0.0, 0.0};
                for (int k = 0; k < dim; ++k) {
                    acc += std::conj(at(k, r)) * at(k, c);
                }
                const Complex want = (r == c) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
                worst = std::max(worst, std::abs(acc - want));
            }
        }
        return worst;
    }
};

inline const char* gate_name(GateId id) {
    switch (id) {
        case GateId::I: return "I";
        case GateId::X: return "X";
        case GateId::Y: return "Y";
        case GateId::Z: return "Z";
        case GateId::H: return "H";
        case GateId::S: return "S";
        case GateId::Sdg: return "Sdg";
        case GateId::Ry: return "Ry";
        case GateId::Rz: return "Rz";
        case GateId::Cnot: return "CNOT";
    }
    return "?";
}

/// Canonical matrix for a named gate. Ry/Rz require an angle, the rest reject
/// one. Entries follow the textbook/IBM conventions:
///   Ry(t) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]]
///   Rz(t) = diag(e^{-it/2}, e^{+it/2})
///   S     = diag(1, i)
inline GateMatrix gate(GateId id, std::optional<double> param = std::nullopt) {
    const bool rotational = (id == GateId::Ry || id == GateId::Rz);
    if (rotational && !param) {
        throw Error(std::string("gate ") + gate_name(id) + " requires an angle");
    }
    if (!rotational && param) {
        throw Error(std::string("gate ") + gate_name(id) + " takes no angle");
    }

    GateMatrix g;
    g.name = gate_name(id);
    g.param = param;
    g.dim = 2;

    constexpr Complex o{1.0, 0.0};
    constexpr Complex z{0.0, 0.0};
    constexpr Complex i{0.0, 1.0};
    const double s = 1.0 / std::sqrt(2.0);

    switch (id) {
        case GateId::I: g.entries = {o, z, z, o}; break;
        case GateId::X: g.entries = {z, o, o, z}; break;
        case GateId::Y: g.entries = {z, -i, i, z}; break;
        case GateId::Z: g.entries = {o, z, z, -o}; break;
        case GateId::H: g.entries = {Complex{s, 0}, Complex{s, 0}, Complex{s, 0}, Complex{-s, 0}}; break;
        case GateId::S: g.entries = {o, z, z, i}; break;
        case GateId::Sdg: g.entries = {o, z, z, -i}; break;
        case GateId::Ry: {
            const double c = std::cos(*param / 2.0);
            const double n = std::sin(*param / 2.0);
            g.entries = {Complex{c, 0}, Complex{-n, 0}, Complex{n, 0}, Complex{c, 0}};
            break;
        }
        case GateId::Rz: {
            const double half = *param / 2.0;
            g.entries = {std::polar(1.0, -half), z, z, std::polar(1.0, half)};
            break;
        }
        case GateId::Cnot:
            g.dim = 4;
            g.entries = {o, z, z, z,
                         z, o, z, z,
                         z, z, z, o,
                         z, z, o, z};
            break;
    }
    return g;
}

/// Kronecker product. The first factor occupies the most-significant position
/// of the composite basis index (matrix convention, i.e. the left ket symbol).
inline GateMatrix tensor(const GateMatrix& a, const GateMatrix& b) {
    GateMatrix g;
    g.name = a.name + "x" + b.name;
    g.dim = a.dim * b.dim;
    g.entries.assign(static_cast<std::size_t>(g.dim) * g.dim, Complex{0.0, 0.0});
    for (int ar = 0; ar < a.dim; ++ar)
        for (int ac = 0; ac < a.dim; ++ac)
            for (int br = 0; br < b.dim; ++br)
                for (int bc = 0; bc < b.dim; ++bc) {
                    const std::size_t row = static_cast<std::size_t>(ar) * b.dim + br;
                    const std::size_t col = static_cast<std::size_t>(ac) * b.dim + bc;
                    g.entries[row * g.dim + col] = a.at(ar, ac) * b.at(br, bc);
                }
    return g;
}

}  // namespace djsim
