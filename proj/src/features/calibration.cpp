#include "features/calibration.hpp"

#include <cmath>

#include "common/errors.hpp"

namespace ssc {

double rms(const std::vector<float>& x) {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (float v : x) acc += double(v) * double(v);
    return std::sqrt(acc / double(x.size()));
}

double spl_db(const std::vector<float>& pa_waveform) {
    const double r = rms(pa_waveform);
    return 20.0 * std::log10(std::max(r, 1e-30) / kRefPressurePa);
}

CalibrationRef CalibrationRef::from_waveform(const std::vector<float>& tone,
                                             double level_db_spl) {
    CalibrationRef ref;
    ref.level_db_spl = level_db_spl;
    ref.reference_rms = rms(tone);
    if (!(ref.reference_rms > 0.0))
        throw DomainError("calibration tone has zero rms");
    return ref;
}

std::vector<float> calibrate(const std::vector<float>& waveform,
                             const CalibrationRef& calibration) {
    if (!(calibration.reference_rms > 0.0))
        throw DomainError("calibration reference rms must be positive");
    const double target_pa =
        kRefPressurePa * std::pow(10.0, calibration.level_db_spl / 20.0);
    const double gain = target_pa / calibration.reference_rms;
    std::vector<float> out(waveform.size());
    for (std::size_t i = 0; i < waveform.size(); ++i)
        out[i] = float(waveform[i] * gain);
    return out;
}

} // namespace ssc
