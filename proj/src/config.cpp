#include "dualring/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "dualring/csv.hpp"

namespace dualring {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& value, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError(where + ": bad numeric value '" + value + "'");
    return v;
}

struct KeyBinding {
    std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

using KeyTable = std::map<std::string, KeyBinding>;

KeyBinding bind(double ExperimentConfig::* field) {
    return {[field](ExperimentConfig& c, const std::string& v, const std::string& w) {
                c.*field = parse_number(v, w);
            },
            [field](const ExperimentConfig& c) { return format_double(c.*field); }};
}

KeyBinding bind(std::int64_t ExperimentConfig::* field) {
    return {[field](ExperimentConfig& c, const std::string& v, const std::string& w) {
                try {
                    c.*field = std::stoll(v);
                } catch (const std::exception&) {
                    throw ConfigError(w + ": bad integer value '" + v + "'");
                }
            },
            [field](const ExperimentConfig& c) { return std::to_string(c.*field); }};
}

KeyBinding bind(std::uint64_t ExperimentConfig::* field) {
    return {[field](ExperimentConfig& c, const std::string& v, const std::string& w) {
                try {
                    c.*field = std::stoull(v);
                } catch (const std::exception&) {
                    throw ConfigError(w + ": bad integer value '" + v + "'");
                }
            },
            [field](const ExperimentConfig& c) { return std::to_string(c.*field); }};
}

KeyBinding bind(int ExperimentConfig::* field) {
    return {[field](ExperimentConfig& c, const std::string& v, const std::string& w) {
                try {
                    c.*field = std::stoi(v);
                } catch (const std::exception&) {
                    throw ConfigError(w + ": bad integer value '" + v + "'");
                }
            },
            [field](const ExperimentConfig& c) { return std::to_string(c.*field); }};
}

// "auto" maps to the negative sentinel (derive the rate from the model).
KeyBinding bind_pair_rate() {
    return {[](ExperimentConfig& c, const std::string& v, const std::string& w) {
                if (v == "auto") {
                    c.pair_rate_hz = -1.0;
                    return;
                }
                c.pair_rate_hz = parse_number(v, w);
            },
            [](const ExperimentConfig& c) {
                return c.pair_rate_hz < 0.0 ? std::string("auto")
                                            : format_double(c.pair_rate_hz);
            }};
}

const std::map<std::string, KeyTable>& schema() {
    static const std::map<std::string, KeyTable> s = {
        {"device",
         {{"ring_one_length_um", bind(&ExperimentConfig::ring_one_length_um)},
          {"ring_two_length_um", bind(&ExperimentConfig::ring_two_length_um)},
          {"ring_one_q_loaded", bind(&ExperimentConfig::ring_one_q_loaded)},
          {"ring_two_q_loaded", bind(&ExperimentConfig::ring_two_q_loaded)},
          {"dc_length_um", bind(&ExperimentConfig::dc_length_um)},
          {"crosstalk", bind(&ExperimentConfig::crosstalk)},
          {"drop_peak_db", bind(&ExperimentConfig::drop_peak_db)},
          {"ring_one_anchor_ghz", bind(&ExperimentConfig::ring_one_anchor_ghz)},
          {"ring_two_anchor_ghz", bind(&ExperimentConfig::ring_two_anchor_ghz)}}},
        {"dispersion",
         {{"lambda_ref_nm", bind(&ExperimentConfig::lambda_ref_nm)},
          {"ng_ref", bind(&ExperimentConfig::ng_ref)},
          {"d_ps_nm_km", bind(&ExperimentConfig::d_ps_nm_km)},
          {"dd_dlambda_ps_nm2_km", bind(&ExperimentConfig::dd_dlambda_ps_nm2_km)},
          {"band_min_nm", bind(&ExperimentConfig::band_min_nm)},
          {"band_max_nm", bind(&ExperimentConfig::band_max_nm)}}},
        {"pump",
         {{"wavelength_nm", bind(&ExperimentConfig::pump_wavelength_nm)},
          {"power_mw", bind(&ExperimentConfig::pump_power_mw)},
          {"linewidth_ghz", bind(&ExperimentConfig::pump_linewidth_ghz)}}},
        {"rates",
         {{"calibration_rate_hz", bind(&ExperimentConfig::calibration_rate_hz)},
          {"calibration_power_mw", bind(&ExperimentConfig::calibration_power_mw)},
          {"line_offset", bind(&ExperimentConfig::line_offset)}}},
        {"detectors",
         {{"signal_loss_db", bind(&ExperimentConfig::signal_loss_db)},
          {"idler_loss_db", bind(&ExperimentConfig::idler_loss_db)},
          {"signal_jitter_ps", bind(&ExperimentConfig::signal_jitter_ps)},
          {"idler_jitter_ps", bind(&ExperimentConfig::idler_jitter_ps)},
          {"signal_dark_hz", bind(&ExperimentConfig::signal_dark_hz)},
          {"idler_dark_hz", bind(&ExperimentConfig::idler_dark_hz)},
          {"signal_background_hz", bind(&ExperimentConfig::signal_background_hz)},
          {"idler_background_hz", bind(&ExperimentConfig::idler_background_hz)},
          {"signal_dead_time_ps", bind(&ExperimentConfig::signal_dead_time_ps)},
          {"idler_dead_time_ps", bind(&ExperimentConfig::idler_dead_time_ps)}}},
        {"simulation",
         {{"pair_rate_hz", bind_pair_rate()},
          {"duration_s", bind(&ExperimentConfig::duration_s)},
          {"g2_duration_s", bind(&ExperimentConfig::g2_duration_s)},
          {"chunk_s", bind(&ExperimentConfig::chunk_s)},
          {"seed", bind(&ExperimentConfig::seed)},
          {"splitter_ratio", bind(&ExperimentConfig::splitter_ratio)}}},
        {"analysis",
         {{"bin_width_ps", bind(&ExperimentConfig::bin_width_ps)},
          {"window_ps", bind(&ExperimentConfig::window_ps)},
          {"accidental_offset_ps", bind(&ExperimentConfig::accidental_offset_ps)},
          {"hist_span_ps", bind(&ExperimentConfig::hist_span_ps)},
          {"t3_span_ps", bind(&ExperimentConfig::t3_span_ps)},
          {"t3_step_ps", bind(&ExperimentConfig::t3_step_ps)}}},
    };
    return s;
}

}  // namespace

void ExperimentConfig::validate() const {
    device().validate();
    pump().validate();
    if (duration_s <= 0.0 || g2_duration_s <= 0.0 || chunk_s <= 0.0)
        throw ConfigError("durations must be > 0");
    if (splitter_ratio < 0.0 || splitter_ratio > 1.0)
        throw ConfigError("splitter_ratio must be in [0,1]");
    if (bin_width_ps <= 0 || window_ps <= 0 || t3_step_ps <= 0 || hist_span_ps <= 0 ||
        t3_span_ps < 0)
        throw ConfigError("analysis widths must be positive");
    if (line_offset == 0) throw ConfigError("line_offset must be nonzero");
}

DispersionModel ExperimentConfig::dispersion() const {
    DispersionModel d;
    d.lambda_ref_nm = lambda_ref_nm;
    d.ng_ref = ng_ref;
    d.d_ps_nm_km = d_ps_nm_km;
    d.dd_dlambda_ps_nm2_km = dd_dlambda_ps_nm2_km;
    d.band_min_nm = band_min_nm;
    d.band_max_nm = band_max_nm;
    d.validate();
    return d;
}

DualRingDevice ExperimentConfig::device() const {
    const DispersionModel disp = dispersion();
    DualRingDevice dev;
    dev.dispersion = disp;
    dev.resonator_one = RingResonator::calibrated(ring_one_length_um, ring_one_q_loaded,
                                                  lambda_ref_nm, disp.group_index_at(lambda_ref_nm));
    dev.resonator_two = RingResonator::calibrated(ring_two_length_um, ring_two_q_loaded,
                                                  lambda_ref_nm, disp.group_index_at(lambda_ref_nm));
    dev.resonator_one.resonance_anchor_ghz = ring_one_anchor_ghz;
    dev.resonator_two.resonance_anchor_ghz = ring_two_anchor_ghz;
    dev.dc_length_um = dc_length_um;
    dev.crosstalk = crosstalk;
    dev.drop_peak_db = drop_peak_db;
    dev.validate();
    return dev;
}

PumpConfig ExperimentConfig::pump() const {
    PumpConfig p;
    p.wavelength_nm = pump_wavelength_nm;
    p.power_mw = pump_power_mw;
    p.linewidth_ghz = pump_linewidth_ghz;
    p.validate();
    return p;
}

SfwmEngine ExperimentConfig::engine() const {
    PumpConfig cal_pump = pump();
    cal_pump.power_mw = calibration_power_mw;
    SfwmEngine eng = SfwmEngine(device()).aligned(cal_pump, line_offset);
    eng.calibrate_kappa(cal_pump, line_offset, calibration_rate_hz);
    return eng;
}

double ExperimentConfig::effective_pair_rate_hz() const {
    if (pair_rate_hz >= 0.0) return pair_rate_hz;
    return engine().pair_generation_rate(pump(), line_offset, -line_offset)
        .generation_rate_hz;
}

SimConfig ExperimentConfig::sim_config(bool with_splitter) const {
    SimConfig sim;
    sim.pair_rate_hz = effective_pair_rate_hz();
    sim.duration_s = with_splitter ? g2_duration_s : duration_s;
    sim.seed = seed;
    sim.signal_chain = {signal_loss_db, signal_jitter_ps,
                        signal_dark_hz + signal_background_hz, signal_dead_time_ps};
    sim.idler_chain = {idler_loss_db, idler_jitter_ps,
                       idler_dark_hz + idler_background_hz, idler_dead_time_ps};
    if (with_splitter) sim.splitter_ratio = splitter_ratio;
    sim.validate();
    return sim;
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
    ExperimentConfig config;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = origin + ":" + std::to_string(line_no);
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            if (schema().find(section) == schema().end())
                throw ConfigError(where + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) throw ConfigError(where + ": key outside any section");
        const auto& table = schema().at(section);
        const auto it = table.find(key);
        if (it == table.end())
            throw ConfigError(where + ": unknown key '" + key + "' in [" + section + "]");
        it->second.set(config, value, where);
    }
    config.validate();
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string config_to_string(const ExperimentConfig& config) {
    std::ostringstream out;
    for (const auto& [section, table] : schema()) {
        out << '[' << section << "]\n";
        for (const auto& [key, binding] : table)
            out << key << " = " << binding.get(config) << '\n';
        out << '\n';
    }
    return out.str();
}

std::string config_hash(const ExperimentConfig& config) {
    const std::string text = config_to_string(config);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace dualring
