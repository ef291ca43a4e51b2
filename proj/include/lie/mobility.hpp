#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lie/algebra.hpp"

namespace lie {

enum class MotionTag { Zero, Periodic, ProjectivelyPeriodic, Spiral, RealHyperbolic, Nilpotent, Degenerate };
std::string to_string(MotionTag t);

struct LinearMotionClass {
    MotionTag tag = MotionTag::Degenerate;
    double omega = 0;  // fundamental frequency for the periodic tags
    double shift = 0;  // real part removed for ProjectivelyPeriodic
    // Smallest t > 0 with exp(t M) proportional to the identity on the
    // periodic tags, and the proportionality factor there.
    double projective_period = 0;
    double factor = 0;
    bool exact = false;  // eigenvalue structure decided over Q
    std::vector<std::complex<double>> eigenvalues;
};

// n <= 4. Entries close to small-height rationals are snapped to them and the
// classification is then exact; otherwise the binary values are used as is.
LinearMotionClass classify_linear_one_param(const Matrix<double>& M);
LinearMotionClass classify_linear_one_param(const Matrix<Rational>& M);
// M acting on homogeneous coordinates, so M and M + a I give the same motion;
// ProjectivelyPeriodic is only reported here.
LinearMotionClass classify_projective_one_param(const Matrix<Rational>& M);

struct ProjectiveForm {
    std::string field;        // in the affine chart (xi, eta)
    Matrix<Rational> matrix;  // homogeneous coordinates (xi, eta, 1)
    LinearMotionClass motion;
    bool accepted = false;
    // Invariant real line on which points move but some point stays at rest.
    std::optional<std::string> fixed_line;
};
std::vector<ProjectiveForm> classify_seven_forms(const Rational& c5 = 2, const Rational& c6 = Rational(1, 2));

class UnsupportedDimension : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class MobilityStage {
    None,
    FixedLineElement,          // a real direction is fixed by the whole linear isotropy
    LineElementStabilizer,     // n = 2: fixing a generic direction leaves motion
    NoRotationAboutLine,       // n = 3: fixing a generic direction leaves no rotation of planes through it
    SurfaceElementStabilizer,  // n = 3: fixing a direction and a plane through it leaves motion
};
std::string to_string(MobilityStage s);

struct MobilityVerdict {
    bool free_mobility = false;
    MobilityStage failing_stage = MobilityStage::None;
    std::string witness;
    std::size_t isotropy_dim = 0;
};

// Parameters, if any, are replaced by generic rationals drawn from seed.
MobilityVerdict free_mobility_infinitesimal(const LieAlgebra& L, const std::vector<Rational>& base,
                                            std::uint64_t seed = 0);

struct Signature {
    std::size_t pos = 0, zero = 0, neg = 0;
    bool operator==(const Signature&) const = default;
};
// K_jk = sum_{s,t} c(j,s,t) c(k,t,s); parameter values are required when the
// constants depend on parameters.
Signature killing_form_signature(const StructureConstants& C, const std::vector<Rational>& params = {});
Matrix<Rational> killing_form(const StructureConstants& C, const std::vector<Rational>& params = {});

}  // namespace lie
