#include "phononcool/cli/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "phononcool/constants.hpp"

namespace phononcool::cli {

namespace {

std::string trim(std::string_view s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string s)
{
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

class ExpressionParser {
public:
    explicit ExpressionParser(std::string_view text) : s_(text) {}

    double parse()
    {
        const double v = expr();
        skip();
        if (pos_ != s_.size()) {
            fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        }
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ConfigError("bad number expression '" + std::string(s_) + "': " + what);
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    double expr()
    {
        double v = term();
        for (;;) {
            if (eat('+')) v += term();
            else if (eat('-')) v -= term();
            else return v;
        }
    }

    double term()
    {
        double v = unary();
        for (;;) {
            if (eat('*')) v *= unary();
            else if (eat('/')) v /= unary();
            else return v;
        }
    }

    double unary()
    {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        const double base = primary();
        if (eat('^')) return std::pow(base, unary());
        return base;
    }

    double primary()
    {
        skip();
        if (eat('(')) {
            const double v = expr();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        if (s_.substr(pos_, 2) == "pi") {
            pos_ += 2;
            return si::pi;
        }
        const std::string rest(s_.substr(pos_));
        char* end = nullptr;
        const double v = std::strtod(rest.c_str(), &end);
        if (end == rest.c_str()) fail("expected a number");
        pos_ += static_cast<std::size_t>(end - rest.c_str());
        return v;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

using Section = std::map<std::string, std::string>;

const std::map<std::string, std::set<std::string>>& known_keys()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"protocol",
         {"g_mhz", "tau_ns", "pulse_area", "ra_mhz", "ra_over_kappa", "kappa_mhz", "n_th", "temperature_mk",
          "omega0_mhz", "p_e"}},
        {"device",
         {"ej_mhz", "ej_uev", "ec_uev", "cx_af", "cg_af", "cj_af", "vx_v", "vg_v", "r_ohm", "temperature_mk",
          "omega0_mhz", "q", "mass_kg", "gap_nm", "g_mhz", "tau_ns", "pulse_area", "ra_mhz", "reset_multiplier"}},
        {"sweep", {"n_th_min", "n_th_max", "n_th_count", "ra_over_kappa", "p", "pulse_area", "with_fidelity"}},
        {"run", {"mode", "t_end_ra", "samples", "n_kicks", "initial", "n_max", "jobs"}},
        {"output", {"path", "format"}},
    };
    return keys;
}

std::optional<double> number(const Section& s, const std::string& key)
{
    const auto it = s.find(key);
    if (it == s.end()) return std::nullopt;
    return evaluate_expression(it->second);
}

double required(const Section& s, const std::string& section, const std::string& key)
{
    const auto v = number(s, key);
    if (!v) throw ConfigError("[" + section + "] is missing " + key);
    return *v;
}

std::size_t count(double v, const std::string& key)
{
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e9) {
        throw ConfigError(key + " must be a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

bool boolean(const std::string& raw, const std::string& key)
{
    const auto v = lower(trim(raw));
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + " must be true or false");
}

Mode mode_from_name(const std::string& name)
{
    if (name == "evolve") return Mode::evolve;
    if (name == "strobe" || name == "stroboscopic") return Mode::stroboscopic;
    if (name == "steady") return Mode::steady;
    if (name == "sweep") return Mode::sweep;
    if (name == "device" || name == "device-report") return Mode::device_report;
    throw ConfigError("unknown mode '" + name + "'");
}

DeviceSection interpret_device(const Section& s)
{
    DeviceSection d;
    auto& dev = d.device;
    const std::string sec = "device";
    const auto ej_mhz = number(s, "ej_mhz");
    const auto ej_uev = number(s, "ej_uev");
    if (ej_mhz.has_value() == ej_uev.has_value()) {
        throw ConfigError("[device] needs exactly one of ej_mhz, ej_uev");
    }
    dev.E_J = ej_mhz ? si::hbar * *ej_mhz * si::mhz : *ej_uev * si::micro_ev;
    if (auto ec = number(s, "ec_uev")) dev.E_c = *ec * si::micro_ev;
    dev.C_x = required(s, sec, "cx_af") * si::attofarad;
    dev.C_g = required(s, sec, "cg_af") * si::attofarad;
    dev.C_J = required(s, sec, "cj_af") * si::attofarad;
    dev.V_x = required(s, sec, "vx_v");
    dev.V_g = number(s, "vg_v").value_or(0.0);
    dev.R = required(s, sec, "r_ohm");
    dev.T = required(s, sec, "temperature_mk") * si::millikelvin;
    dev.omega0 = required(s, sec, "omega0_mhz") * si::mhz;
    dev.Q = required(s, sec, "q");
    if (auto m = number(s, "mass_kg")) dev.mass = *m;
    if (auto gap = number(s, "gap_nm")) dev.gap = *gap * 1e-9;
    if (auto g = number(s, "g_mhz")) dev.g_override = *g * si::mhz;

    const auto tau = number(s, "tau_ns");
    const auto area = number(s, "pulse_area");
    if (tau.has_value() == area.has_value()) {
        throw ConfigError("[device] needs exactly one of tau_ns, pulse_area");
    }
    if (tau) d.timing.tau = *tau * si::ns;
    d.timing.pulse_area = area;
    d.timing.r_a = required(s, sec, "ra_mhz") * si::mhz;
    d.reset_multiplier = number(s, "reset_multiplier").value_or(10.0);
    try {
        dev.validate();
    }
    catch (const DomainError& e) {
        throw ConfigError(std::string("[device] ") + e.what());
    }
    return d;
}

std::map<std::string, double> interpret_protocol(const Section& s)
{
    std::map<std::string, double> o;
    auto put = [&](const std::string& key, const std::string& name, double unit) {
        if (auto v = number(s, key)) o[name] = *v * unit;
    };
    put("g_mhz", "g", si::mhz);
    put("tau_ns", "tau", si::ns);
    put("pulse_area", "pulse_area", 1.0);
    put("ra_mhz", "r_a", si::mhz);
    put("ra_over_kappa", "ra_over_kappa", 1.0);
    put("kappa_mhz", "kappa", si::mhz);
    put("n_th", "n_th", 1.0);
    put("temperature_mk", "temperature", si::millikelvin);
    put("omega0_mhz", "omega0", si::mhz);
    put("p_e", "p_e", 1.0);
    if (o.count("tau") && o.count("pulse_area")) {
        throw ConfigError("[protocol] takes tau_ns or pulse_area, not both");
    }
    if (o.count("r_a") && o.count("ra_over_kappa")) {
        throw ConfigError("[protocol] takes ra_mhz or ra_over_kappa, not both");
    }
    if (o.count("n_th") && o.count("temperature")) {
        throw ConfigError("[protocol] takes n_th or temperature_mk, not both");
    }
    return o;
}

SweepSection interpret_sweep(const Section& s)
{
    SweepSection w;
    const std::string sec = "sweep";
    w.n_th_min = required(s, sec, "n_th_min");
    w.n_th_max = required(s, sec, "n_th_max");
    w.n_th_count = count(required(s, sec, "n_th_count"), "n_th_count");
    const auto ra = s.find("ra_over_kappa");
    if (ra == s.end()) throw ConfigError("[sweep] is missing ra_over_kappa");
    w.ra_over_kappa = evaluate_list(ra->second);
    const auto p = s.find("p");
    w.p = p == s.end() ? std::vector<double>{0.0} : evaluate_list(p->second);
    w.pulse_area = number(s, "pulse_area");
    if (auto f = s.find("with_fidelity"); f != s.end()) w.with_fidelity = boolean(f->second, "with_fidelity");
    return w;
}

RunSection interpret_run(const Section& s)
{
    RunSection r;
    if (auto v = number(s, "t_end_ra")) r.t_end_ra = *v;
    if (auto v = number(s, "samples")) r.samples = count(*v, "samples");
    if (auto v = number(s, "n_kicks")) r.n_kicks = count(*v, "n_kicks");
    if (auto v = number(s, "n_max")) r.n_max = count(*v, "n_max");
    if (auto v = number(s, "jobs")) r.jobs = count(*v, "jobs");
    if (auto it = s.find("initial"); it != s.end()) {
        const auto v = lower(trim(it->second));
        if (v == "thermal") {
            r.initial = InitialState::thermal;
        }
        else if (v == "vacuum") {
            r.initial = InitialState::vacuum;
        }
        else if (v.rfind("fock:", 0) == 0) {
            r.initial = InitialState::fock;
            r.fock_level = count(evaluate_expression(v.substr(5)), "initial fock level");
        }
        else {
            throw ConfigError("initial must be thermal, vacuum or fock:<n>");
        }
    }
    return r;
}

} // namespace

std::string_view mode_name(Mode m)
{
    switch (m) {
    case Mode::evolve: return "evolve";
    case Mode::stroboscopic: return "strobe";
    case Mode::steady: return "steady";
    case Mode::sweep: return "sweep";
    case Mode::device_report: return "device";
    }
    return "unknown";
}

std::string_view format_name(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

RawConfig parse_ini(std::string_view text)
{
    RawConfig raw;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find_first_of("#;"); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": unterminated section");
            section = lower(trim(std::string_view(t).substr(1, t.size() - 2)));
            if (!known_keys().count(section)) throw ConfigError("unknown section [" + section + "]");
            raw[section];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        if (section.empty()) throw ConfigError("line " + std::to_string(line_no) + ": key outside a section");
        const auto key = lower(trim(std::string_view(t).substr(0, eq)));
        const auto value = trim(std::string_view(t).substr(eq + 1));
        if (!known_keys().at(section).count(key)) {
            throw ConfigError("unknown key '" + key + "' in [" + section + "]");
        }
        if (raw[section].count(key)) throw ConfigError("duplicate key '" + key + "' in [" + section + "]");
        raw[section][key] = value;
    }
    return raw;
}

double evaluate_expression(std::string_view expr)
{
    const double v = ExpressionParser(expr).parse();
    if (!std::isfinite(v)) throw ConfigError("expression '" + std::string(expr) + "' is not finite");
    return v;
}

std::vector<double> evaluate_list(std::string_view text)
{
    std::vector<double> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = text.find(',', start);
        const auto item = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
        if (!item.empty()) out.push_back(evaluate_expression(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<double> SweepSection::n_th_grid() const
{
    std::vector<double> grid(n_th_count);
    if (n_th_count == 1) {
        grid[0] = n_th_min;
        return grid;
    }
    const double a = std::log10(n_th_min);
    const double b = std::log10(n_th_max);
    for (std::size_t i = 0; i < n_th_count; ++i) {
        grid[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n_th_count - 1));
    }
    grid.front() = n_th_min;
    grid.back() = n_th_max;
    return grid;
}

ProtocolParams RunConfig::resolve_protocol() const
{
    ProtocolParams p;
    if (device) {
        try {
            p = derive_protocol(device->device, device->timing).first;
        }
        catch (const DomainError& e) {
            throw ConfigError(std::string("[device] ") + e.what());
        }
    }
    const auto& o = protocol_overrides;
    auto get = [&o](const char* k) -> std::optional<double> {
        const auto it = o.find(k);
        return it == o.end() ? std::nullopt : std::optional<double>(it->second);
    };
    if (auto v = get("g")) p.g = *v;
    if (auto v = get("kappa")) p.kappa = *v;
    if (auto v = get("p_e")) p.p_e = *v;
    if (auto v = get("n_th")) {
        p.n_th = *v;
    }
    else if (auto t = get("temperature")) {
        const auto w = get("omega0");
        const double omega0 = w ? *w : device ? device->device.omega0 : 0.0;
        if (!(omega0 > 0.0)) throw ConfigError("[protocol] temperature_mk needs omega0_mhz");
        p.n_th = 1.0 / std::expm1(si::hbar * omega0 / (si::boltzmann * *t));
    }
    if (auto v = get("pulse_area")) {
        if (!(p.g > 0.0)) throw ConfigError("[protocol] pulse_area needs a coupling g");
        p.tau = *v / p.g;
    }
    else if (auto v = get("tau")) {
        p.tau = *v;
    }
    else if (device && get("g") && device->timing.pulse_area) {
        p.tau = *device->timing.pulse_area / p.g;
    }
    if (auto v = get("ra_over_kappa")) {
        p.r_a = *v * p.kappa;
    }
    else if (auto v = get("r_a")) {
        p.r_a = *v;
    }
    try {
        p.validate();
    }
    catch (const DomainError& e) {
        throw ConfigError(std::string("protocol parameters: ") + e.what());
    }
    return p;
}

std::optional<QubitEnvironment> RunConfig::environment() const
{
    if (!device) return std::nullopt;
    return derive_protocol(device->device, device->timing).second;
}

void RunConfig::validate() const
{
    switch (mode) {
    case Mode::evolve:
    case Mode::stroboscopic:
    case Mode::steady:
        if (!device && protocol_overrides.empty()) {
            throw ConfigError("mode " + std::string(mode_name(mode)) + " needs a [protocol] or [device] section");
        }
        resolve_protocol();
        break;
    case Mode::sweep: {
        if (!sweep) throw ConfigError("sweep mode needs a [sweep] section");
        if (!device && protocol_overrides.empty()) {
            throw ConfigError("sweep mode needs a [protocol] or [device] section for the base parameters");
        }
        const auto& s = *sweep;
        if (s.n_th_count == 0 || s.ra_over_kappa.empty() || s.p.empty()) {
            throw ConfigError("sweep grid is empty");
        }
        if (!(s.n_th_min > 0.0) || !(s.n_th_max >= s.n_th_min)) {
            throw ConfigError("sweep needs 0 < n_th_min <= n_th_max");
        }
        for (double r : s.ra_over_kappa) {
            if (!(r >= 0.0)) throw ConfigError("ra_over_kappa values must be non-negative");
        }
        for (double p : s.p) {
            if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p values must lie in [0, 1]");
        }
        if (s.with_fidelity && !device) {
            throw ConfigError("with_fidelity needs a [device] section for the qubit environment");
        }
        break;
    }
    case Mode::device_report:
        if (!device) throw ConfigError("device mode needs a [device] section");
        break;
    }
    if (mode == Mode::evolve) {
        if (!(run.t_end_ra > 0.0)) throw ConfigError("t_end_ra must be positive");
        if (run.samples < 2) throw ConfigError("samples must be at least 2");
    }
    if (run.n_max && *run.n_max < 1) throw ConfigError("n_max must be at least 1");
    if (run.jobs < 1) throw ConfigError("jobs must be at least 1");
}

RunConfig interpret(const RawConfig& raw, Mode mode)
{
    RunConfig c;
    c.mode = mode;
    const Section empty;
    auto section = [&](const char* name) -> const Section* {
        const auto it = raw.find(name);
        return it == raw.end() ? nullptr : &it->second;
    };
    if (auto s = section("run")) {
        if (auto m = s->find("mode"); m != s->end() && mode_from_name(lower(trim(m->second))) != mode) {
            throw ConfigError("config file mode '" + m->second + "' conflicts with subcommand " +
                              std::string(mode_name(mode)));
        }
        c.run = interpret_run(*s);
    }
    if (auto s = section("device")) c.device = interpret_device(*s);
    if (auto s = section("protocol")) c.protocol_overrides = interpret_protocol(*s);
    if (auto s = section("sweep")) c.sweep = interpret_sweep(*s);
    if (auto s = section("output")) {
        if (auto it = s->find("path"); it != s->end()) c.output_path = it->second;
        if (auto it = s->find("format"); it != s->end()) {
            const auto f = lower(trim(it->second));
            if (f == "csv") c.format = OutputFormat::csv;
            else if (f == "json") c.format = OutputFormat::json;
            else throw ConfigError("format must be csv or json");
        }
    }
    return c;
}

RunConfig load_config_text(std::string_view text, Mode mode) { return interpret(parse_ini(text), mode); }

RunConfig load_config_file(const std::string& path, Mode mode)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_config_text(ss.str(), mode);
}

} // namespace phononcool::cli
