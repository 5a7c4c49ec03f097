#include "core/receiver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace sqp {

namespace {

// Compile-time dimension bookkeeping: exponents of (m, s, kg, nm, sr).
// nm is tracked as its own axis because the interface quotes brightness per
// nm and the filter width in nm; the pair must cancel, not convert.
template <int M, int S, int KG, int NM, int SR>
struct Dim {
    static constexpr int m = M, s = S, kg = KG, nm = NM, sr = SR;
};

template <class A, class B>
using DimProduct = Dim<A::m + B::m, A::s + B::s, A::kg + B::kg, A::nm + B::nm, A::sr + B::sr>;

using SkyBrightness = Dim<0, -3, 1, -1, -1>;   // W m^-2 nm^-1 sr^-1
using CollectionParameter = Dim<2, 1, 0, 1, 1>; // nm s sr m^2
using Energy = Dim<2, -2, 1, 0, 0>;             // J

// The brightness-aperture product handed to the photon-energy division must
// be an energy; anything else means a broken unit convention upstream.
static_assert(std::is_same_v<DimProduct<SkyBrightness, CollectionParameter>, Energy>,
              "sky brightness times collection parameter must be an energy");

constexpr double kPlanck = 6.62607015e-34;      // J s, exact SI
constexpr double kLightSpeed = 299792458.0;     // m/s, exact SI
constexpr double kPi = 3.141592653589793238462643383279502884;

void require_positive(double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) {
        throw std::domain_error(std::string("receiver: ") + name + " must be positive");
    }
}

void validate(const ReceiverConfig& cfg) {
    require_positive(cfg.wavelength_nm, "wavelength_nm");
    require_positive(cfg.aperture_radius_m, "aperture_radius_m");
    require_positive(cfg.fov_sr, "fov_sr");
    require_positive(cfg.bandwidth_hz, "bandwidth_hz");
    require_positive(cfg.filter_nm, "filter_nm");
    if (!std::isfinite(cfg.sky_brightness) || cfg.sky_brightness < 0.0) {
        throw std::domain_error("receiver: sky_brightness must be >= 0");
    }
}

}  // namespace

double collection_parameter(const ReceiverConfig& cfg) {
    validate(cfg);
    return cfg.filter_nm * (1.0 / cfg.bandwidth_hz) * cfg.fov_sr *
           (cfg.aperture_radius_m * cfg.aperture_radius_m);
}

double background_photons(const ReceiverConfig& cfg) {
    const double gamma_r = collection_parameter(cfg);  // validates cfg
    const double lambda_m = cfg.wavelength_nm * 1e-9;  // single nm -> m conversion
    const double collected_energy = cfg.sky_brightness * gamma_r;  // J, see static_assert
    return (kPi * lambda_m / (kPlanck * kLightSpeed)) * collected_energy;
}

}  // namespace sqp
