#pragma once

// Reference values recomputed independently with mpmath at 60 significant
// digits and rounded to at least 20.

#include <array>
#include <vector>

namespace oracle {

// (1/2; 1/2)_inf
inline constexpr double kQPochInfHalf = 0.2887880950866024212789;

// J_0(0.5; 0.36), q = 0.6
inline constexpr double kJ0Half = 0.7895503756666273151546;
inline constexpr const char* kJ0HalfText = "0.7895503756666273151546";
// x^{-nu} J_nu(x; 0.36) at nu = 0.5, x = 0.3
inline constexpr double kJregHalf = 1.252358837621519254942;
// J_0.5'(0.7; 0.36)
inline constexpr double kJDerivHalf = -0.4126923339911660817261;
// calJ_0.3(0.4; 0.5)
inline constexpr std::array<double, 2> kCalJ{0.2961518158117207227454, 0.4076180049979614257786};
// D_q J_1.5(0.5; 0.25), q = 0.5
inline constexpr double kDqJ = 1.121258398428608984723;
// J_0(0.0005; 0.999)
inline constexpr double kClassical = 0.7654177226945312251608;

// Hurwitz deviations at m = 5, 10, 20, 40.
inline const std::vector<double> kHurwitzR{0.02758990064508864837988, 0.0008427211524017851979227,
                                           8.223781095976984047238e-7, 7.842803305820793756296e-13};
inline const std::vector<double> kHurwitzTildeR{0.0007237196524949936897646, 7.062112164705479646507e-7,
                                                6.73494988774073274132e-13, 6.125424776771236513701e-25};

// J_nu(x; p) beyond the default grid.
inline constexpr double kJNegative = -0.29143559899898458661;  // nu = -2.5, x = 1.7, p = 0.64
inline constexpr double kJLarge = -373.74648885085876309;      // nu = 0.3, x = 5, p = 0.64
inline constexpr std::array<double, 2> kCalJHigh{-0.1447374835987643028, 0.19921405563983219297};  // nu = 2.7, x = 0.9, q = 0.8

// Positive zeros of J_nu(.; q^2), named by (nu, q).
inline const std::vector<double> kZerosHalf08{0.66007041995434328032, 1.2939756899352357867, 1.8786910200366198443};
inline const std::vector<double> kZerosZero06{1.2201015584499422131, 2.7293347374727733368, 4.6289197674209822157};
inline const std::vector<double> kZerosMinusHalf05{1.3110257698704052751, 3.952004875302090271,
                                                   7.9997627591071281706};
inline const std::vector<double> kZerosHalf03{3.2836451564992757326, 11.111071298876462376, 37.03703703679916899,
                                              123.45679012345679011, 411.52263374485596708, 1371.7421124828532236};
inline const std::vector<double> kZeros15Half{1.9583554931135227601, 3.9997722525678252806, 7.9999999389715247434,
                                              15.999999999999047805, 31.999999999999999999, 64.0};
// int_0^1 x J_0(q j_1 x; q^2)^2 d_qx at q = 0.6
inline constexpr double kNormZero06 = 0.30505071470917517753;

// Positive zeros of D_q J_nu(.; q^2).
inline const std::vector<double> kDqZerosOne06{0.97252670447816450843, 2.7072590117380753011};
inline const std::vector<double> kDqZerosHalf08{0.27626945500588406852, 1.0764581974374200186,
                                                1.7730487271126094042};

// Lommel coefficients, lowest power first.
inline const std::vector<double> kR3{0.088857175931210751146, -0.2502831808383886874, -0.42144169362341216457, 1.0};
inline const std::vector<double> kR5{0.27172554994368346352,   -0.038649651845395005627, -0.17630120044287644273,
                                     -0.21172562457868911529, -0.071546048361898444456, 1.0};
inline const std::vector<double> kTildeR4{40591.91986228712422, -32127.50924751287105, 1552.0937641066476363};
inline const std::vector<double> kTildeH3{0.0, -0.75668068147554921374, 0.0, 4.8174540348534861343};

}  // namespace oracle
