#pragma once

// Free-space homodyne receiver radiometry: how many thermal background
// photons per detection mode the instrument admits.

namespace sqp {

struct ReceiverConfig {
    double wavelength_nm;      // operating wavelength, nm, > 0
    double sky_brightness;     // W m^-2 nm^-1 sr^-1, >= 0 (0 = dark sky)
    double aperture_radius_m;  // m, > 0
    double fov_sr;             // field of view, sr, > 0
    double bandwidth_hz;       // detection bandwidth, Hz, > 0
    double filter_nm;          // spectral filter width, nm, > 0
};

// Photon collection parameter Gamma_R = filter * bandwidth^-1 * fov *
// aperture_radius^2, in nm s sr m^2.
double collection_parameter(const ReceiverConfig& cfg);

// Mean thermal photons per mode: n_B = (pi lambda / (h c)) * B * Gamma_R,
// with h and c the exact SI constants and lambda converted to meters.
// B * Gamma_R carries W s = J; a compile-time dimension check enforces this.
double background_photons(const ReceiverConfig& cfg);

}  // namespace sqp
