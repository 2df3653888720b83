#pragma once

// Frozen values from tests/oracle/reference_values.py (mpmath, 40 digits,
// evaluated from the series definitions and the Psi-integral form of xi).

#include <array>
#include <complex>

namespace xilab::reference {

inline constexpr double psi_1 = 0.043217405606654007288;
inline constexpr double psi_2 = 0.0018674427438695455238;
inline constexpr double psi_half = 0.20974774404188306168;
inline constexpr double F_0 = 0.043217405606654007288;
inline constexpr double F1_0 = -0.5;
inline constexpr double G_0 = 3.5735752037369875527;
inline constexpr double G_half = 1.1022511525085070124e-6;
inline constexpr double G_03 = 0.059387649955129484642;
inline constexpr double G1_02 = -12.331934007157843905;
inline constexpr double G3_01 = 3228.522080371570762;
inline constexpr double int_G3_t2 = -7.1471504074739751054;

inline constexpr double eta_0 = 0.49712077818831410991;

struct EtaPoint {
  std::complex<double> z;
  std::complex<double> value;
  double tol;  // accuracy of the frozen digits
};

inline const std::array<EtaPoint, 12> eta_points = {{
    {{0.4, 10.0}, {0.27552016666804472914, 0.013309198198120313129}, 1e-18},
    {{0.3, 12.0}, {0.21061895896672395979, 0.009357432411704952133}, 1e-18},
    {{0.0, 20.0}, {0.037967850310935684224, 0.0}, 1e-18},
    {{0.0, 30.0}, {-0.00070569795882154742063, 0.0}, 1e-20},
    {{0.5, 5.0}, {0.43041612673542272107, 0.012561276759962556857}, 1e-18},
    {{1.0, 60.0}, {-6.6595672913921034823e-9, -2.2940451329046242473e-8}, 1e-24},
    {{-0.7, 33.0}, {-0.0006763114201829947441, 0.000084406522203094303965}, 1e-20},
    {{0.0, 60.0}, {-1.50166224798e-8, 0.0}, 1e-19},
    {{0.0, 99.0}, {-4.69663151436e-15, 0.0}, 1e-25},
    {{0.0, 100.0}, {3.16219512596e-15, 0.0}, 1e-25},
    {{0.05, 100.0}, {3.1671463481e-15, -3.0659009429e-16}, 1e-24},
    {{1.0, 100.0}, {5.25481472607e-15, -6.23879562348e-15}, 1e-24},
}};

inline constexpr double du_dy_zero1 = -0.000691359544608;
inline constexpr double du_dy_zero2 = 8.87488810255e-6;

/// y = 2 t for the first eleven zeta zeros (the first ten lie below y = 100).
inline constexpr std::array<double, 11> zeros = {28.2694502834694, 42.0440792775431, 50.0217151602914,
                                                 60.849752251719,  65.8701231754784, 75.1723563176513,
                                                 81.837438024295,  86.65414656183,   96.0103017623343,
                                                 99.5476649553446, 105.940642955429};

}  // namespace xilab::reference
