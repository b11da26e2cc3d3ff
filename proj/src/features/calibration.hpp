#ifndef SSC_FEATURES_CALIBRATION_HPP
#define SSC_FEATURES_CALIBRATION_HPP

#include <vector>

namespace ssc {

// Reference: a 1 kHz sine whose level is defined as 60 dB SPL. Calibration
// maps digital full-scale onto sound pressure in pascal, so downstream
// levels are 20*log10(rms / 20 uPa).
struct CalibrationRef {
    double frequency_hz = 1000.0;
    double level_db_spl = 60.0;
    double reference_rms = 0.0; // digital rms of the calibration tone

    static CalibrationRef from_waveform(const std::vector<float>& tone,
                                        double level_db_spl = 60.0);
};

inline constexpr double kRefPressurePa = 20e-6;

// Returns the waveform scaled to pascal units.
std::vector<float> calibrate(const std::vector<float>& waveform,
                             const CalibrationRef& calibration);

double rms(const std::vector<float>& x);
double spl_db(const std::vector<float>& pa_waveform);

} // namespace ssc

#endif
