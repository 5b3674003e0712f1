#include "nlsh/config.hpp"

#include "nlsh/diagnostics.hpp"

#include "nlsh/error.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace nlsh {
namespace {

struct Entry {
    std::string value;
    int line = 0;
};

using EntryMap = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"model", {"variant", "mu", "kernel", "convolution", "nonlinearity"}},
        {"grid", {"nx", "ny", "lx", "ly", "bc"}},
        {"stepper", {"scheme", "dt", "t_end", "snapshot_stride", "series_stride"}},
        {"ic", {"generator", "seed", "amplitude", "mode_x", "mode_y", "width"}},
        {"output", {"directory", "formats"}},
        {"analysis",
         {"lemma1", "h2", "lyapunov", "lyapunov_m", "reorth_period", "lyapunov_transient", "lyapunov_time",
          "theory", "theory_C", "slack"}},
    };
    return s;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

void check_key(const std::string& full, int line) {
    const auto dot = full.find('.');
    const std::string section = full.substr(0, dot);
    const auto it = schema().find(section);
    if (it == schema().end()) throw ConfigError(line, full, "unknown section '" + section + "'");
    if (dot == std::string::npos || !it->second.count(full.substr(dot + 1))) {
        throw ConfigError(line, full, "unknown key");
    }
}

EntryMap tokenize(std::string_view text) {
    EntryMap entries;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(line, "", "malformed section header '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            if (!schema().count(section)) throw ConfigError(line, section, "unknown section");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "", "expected 'key = value', got '" + s + "'");
        if (section.empty()) throw ConfigError(line, trim(s.substr(0, eq)), "key outside of any section");
        const std::string key = section + "." + trim(s.substr(0, eq));
        check_key(key, line);
        if (entries.count(key)) {
            throw ConfigError(line, key, "duplicate key (first set on line " + std::to_string(entries[key].line) + ")");
        }
        entries[key] = {trim(s.substr(eq + 1)), line};
    }
    return entries;
}

class Reader {
public:
    explicit Reader(EntryMap entries) : entries_(std::move(entries)) {}

    const Entry* find(const std::string& key) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }
    int line(const std::string& key) const {
        const Entry* e = find(key);
        return e ? e->line : 0;
    }

    template <typename Fn>
    void with(const std::string& key, Fn&& fn) const {
        const Entry* e = find(key);
        if (!e) return;
        try {
            fn(e->value);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& ex) {
            throw ConfigError(e->line, key, ex.what());
        }
    }

    void real(const std::string& key, double& out) const {
        with(key, [&](const std::string& v) { out = parse_real(v); });
    }
    void integer(const std::string& key, int& out) const {
        with(key, [&](const std::string& v) {
            int x = 0;
            const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
            if (ec != std::errc{} || p != v.data() + v.size()) throw InvalidArgument("expected an integer, got '" + v + "'");
            out = x;
        });
    }
    void boolean(const std::string& key, bool& out) const {
        with(key, [&](const std::string& v) {
            if (v == "on" || v == "true" || v == "yes" || v == "1") out = true;
            else if (v == "off" || v == "false" || v == "no" || v == "0") out = false;
            else throw InvalidArgument("expected a boolean, got '" + v + "'");
        });
    }

private:
    EntryMap entries_;
};

std::string fmt_real(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

double parse_real(std::string_view text) {
    std::string s = trim(text);
    double factor = 1.0;
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
        factor = std::numbers::pi;
        s = trim(s.substr(0, s.size() - 2));
        if (!s.empty() && s.back() == '*') s = trim(s.substr(0, s.size() - 1));
        if (s.empty()) return factor;
    }
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) {
        throw InvalidArgument("expected a real number, got '" + std::string(text) + "'");
    }
    return v * factor;
}

RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
    EntryMap entries = tokenize(text);
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw ConfigError(0, o, "override must look like section.key=value");
        const std::string key = trim(o.substr(0, eq));
        check_key(key, 0);
        entries[key] = {trim(o.substr(eq + 1)), 0};
    }
    const Reader r(std::move(entries));
    RunConfig c;

    if (!r.find("model.mu")) throw ConfigError(0, "model.mu", "missing required key");
    r.with("model.variant", [&](const std::string& v) {
        if (v == "nonlocal") c.model.variant = ModelVariant::Nonlocal;
        else if (v == "local") c.model.variant = ModelVariant::LocalCubic;
        else throw InvalidArgument("expected 'nonlocal' or 'local'");
    });
    r.real("model.mu", c.model.mu);
    r.with("model.kernel", [&](const std::string& v) {
        (void)Kernel::parse(v);
        c.model.kernel = v;
    });
    r.with("model.convolution", [&](const std::string& v) {
        if (v == "auto") c.model.convolution.reset();
        else if (v == "circular") c.model.convolution = ConvolutionMode::Circular;
        else if (v == "zero_padded") c.model.convolution = ConvolutionMode::ZeroPadded;
        else throw InvalidArgument("expected auto, circular or zero_padded");
    });
    r.boolean("model.nonlinearity", c.model.nonlinearity);

    r.integer("grid.nx", c.grid.nx);
    r.integer("grid.ny", c.grid.ny);
    r.real("grid.lx", c.grid.lx);
    r.real("grid.ly", c.grid.ly);
    r.with("grid.bc", [&](const std::string& v) { c.grid.bc = boundary_from_string(v); });
    if (c.grid.lx == 0.0) c.grid.lx = 16.0 * std::numbers::pi;
    if (c.grid.ly == 0.0) c.grid.ly = 16.0 * std::numbers::pi;
    try {
        (void)c.make_grid();
    } catch (const InvalidArgument& e) {
        throw ConfigError(r.line("grid.nx"), "grid", e.what());
    }

    r.with("stepper.scheme", [&](const std::string& v) {
        c.stepper.scheme = scheme_from_string(v);
        c.scheme_explicit = true;
    });
    if (!c.scheme_explicit && c.grid.bc == Boundary::Clamped) c.stepper.scheme = Scheme::IMEX_BE;
    if (c.stepper.scheme == Scheme::ETDRK4 && c.grid.bc == Boundary::Clamped) {
        throw ConfigError(r.line("stepper.scheme"), "stepper.scheme",
                          "scheme ETDRK4 is incompatible with grid.bc = clamped (use IMEX_BE or IMEX_CN)");
    }
    r.real("stepper.dt", c.stepper.dt);
    if (!(c.stepper.dt > 0.0)) throw ConfigError(r.line("stepper.dt"), "stepper.dt", "must be positive");
    r.real("stepper.t_end", c.stepper.t_end);
    if (!(c.stepper.t_end >= 0.0)) throw ConfigError(r.line("stepper.t_end"), "stepper.t_end", "must be nonnegative");
    r.integer("stepper.snapshot_stride", c.stepper.snapshot_stride);
    r.integer("stepper.series_stride", c.stepper.series_stride);
    if (c.stepper.snapshot_stride < 1) {
        throw ConfigError(r.line("stepper.snapshot_stride"), "stepper.snapshot_stride", "must be >= 1");
    }
    if (c.stepper.series_stride < 1) {
        throw ConfigError(r.line("stepper.series_stride"), "stepper.series_stride", "must be >= 1");
    }

    r.with("ic.generator", [&](const std::string& v) {
        if (v != "smooth_random" && v != "single_mode" && v != "bump" && v != "zero") {
            throw InvalidArgument("expected smooth_random, single_mode, bump or zero");
        }
        c.ic.generator = v;
    });
    r.with("ic.seed", [&](const std::string& v) {
        std::uint64_t x = 0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (ec != std::errc{} || p != v.data() + v.size()) throw InvalidArgument("expected an unsigned integer");
        c.ic.seed = x;
    });
    r.real("ic.amplitude", c.ic.norm);
    if (!(c.ic.norm >= 0.0)) throw ConfigError(r.line("ic.amplitude"), "ic.amplitude", "must be nonnegative");
    r.integer("ic.mode_x", c.ic.mode_x);
    r.integer("ic.mode_y", c.ic.mode_y);
    r.real("ic.width", c.ic.width);

    r.with("output.directory", [&](const std::string& v) { c.output.directory = v; });
    r.with("output.formats", [&](const std::string& v) {
        c.output.csv = c.output.sh2d = c.output.json = false;
        std::istringstream in(v);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            tok = trim(tok);
            if (tok == "csv") c.output.csv = true;
            else if (tok == "sh2d") c.output.sh2d = true;
            else if (tok == "json") c.output.json = true;
            else if (!tok.empty()) throw InvalidArgument("unknown output format '" + tok + "'");
        }
    });

    r.boolean("analysis.lemma1", c.analysis.lemma1);
    r.boolean("analysis.h2", c.analysis.h2);
    r.boolean("analysis.lyapunov", c.analysis.lyapunov);
    r.integer("analysis.lyapunov_m", c.analysis.lyapunov_m);
    r.integer("analysis.reorth_period", c.analysis.reorth_period);
    r.real("analysis.lyapunov_transient", c.analysis.lyapunov_transient);
    r.real("analysis.lyapunov_time", c.analysis.lyapunov_time);
    r.boolean("analysis.theory", c.analysis.theory);
    r.real("analysis.theory_C", c.analysis.theory_C);
    r.with("analysis.slack", [&](const std::string& v) {
        if (v == "auto") c.analysis.slack.reset();
        else c.analysis.slack = parse_real(v);
    });
    if (c.analysis.lyapunov && !(c.model.mu > 0.0)) {
        throw ConfigError(r.line("analysis.lyapunov"), "analysis.lyapunov",
                          "Lyapunov analysis requires model.mu > 0" +
                              (r.line("model.mu") > 0 ? " (model.mu on line " + std::to_string(r.line("model.mu")) + ")"
                                                      : std::string()) +
                              "; mu <= 0 runs are decay tests");
    }
    if (c.analysis.lyapunov_m < 1) {
        throw ConfigError(r.line("analysis.lyapunov_m"), "analysis.lyapunov_m", "must be >= 1");
    }
    if (c.analysis.reorth_period < 1) {
        throw ConfigError(r.line("analysis.reorth_period"), "analysis.reorth_period", "must be >= 1");
    }
    if (!(c.analysis.theory_C > 0.0)) {
        throw ConfigError(r.line("analysis.theory_C"), "analysis.theory_C", "must be positive");
    }
    return c;
}

Grid RunConfig::make_grid() const { return Grid(grid.nx, grid.ny, grid.lx, grid.ly, grid.bc); }

Kernel RunConfig::make_kernel() const { return Kernel::parse(model.kernel); }

ConvolutionMode RunConfig::convolution_mode() const {
    return model.convolution.value_or(default_mode(grid.bc));
}

ModelParams RunConfig::make_params() const {
    ModelParams p;
    if (model.variant == ModelVariant::Nonlocal) {
        p = make_nonlocal(model.mu, std::make_shared<const NonlocalOperator>(make_kernel(), make_grid(),
                                                                             convolution_mode()));
    } else {
        p = make_local(model.mu);
    }
    p.nonlinearity = model.nonlinearity;
    return p;
}

double RunConfig::slack() const { return analysis.slack.value_or(default_slack(grid.bc)); }

std::string to_text(const RunConfig& c) {
    auto on = [](bool b) { return b ? "on" : "off"; };
    std::ostringstream out;
    out << "[model]\n"
        << "variant = " << to_string(c.model.variant) << "\n"
        << "mu = " << fmt_real(c.model.mu) << "\n"
        << "kernel = " << c.model.kernel << "\n"
        << "convolution = " << (c.model.convolution ? std::string(to_string(*c.model.convolution)) : "auto") << "\n"
        << "nonlinearity = " << on(c.model.nonlinearity) << "\n\n"
        << "[grid]\n"
        << "nx = " << c.grid.nx << "\n"
        << "ny = " << c.grid.ny << "\n"
        << "lx = " << fmt_real(c.grid.lx) << "\n"
        << "ly = " << fmt_real(c.grid.ly) << "\n"
        << "bc = " << to_string(c.grid.bc) << "\n\n"
        << "[stepper]\n"
        << "scheme = " << to_string(c.stepper.scheme) << "\n"
        << "dt = " << fmt_real(c.stepper.dt) << "\n"
        << "t_end = " << fmt_real(c.stepper.t_end) << "\n"
        << "snapshot_stride = " << c.stepper.snapshot_stride << "\n"
        << "series_stride = " << c.stepper.series_stride << "\n\n"
        << "[ic]\n"
        << "generator = " << c.ic.generator << "\n"
        << "seed = " << c.ic.seed << "\n"
        << "amplitude = " << fmt_real(c.ic.norm) << "\n"
        << "mode_x = " << c.ic.mode_x << "\n"
        << "mode_y = " << c.ic.mode_y << "\n"
        << "width = " << fmt_real(c.ic.width) << "\n\n"
        << "[output]\n";
    if (!c.output.directory.empty()) out << "directory = " << c.output.directory << "\n";
    std::string formats;
    for (auto [flag, name] : {std::pair{c.output.csv, "csv"}, {c.output.sh2d, "sh2d"}, {c.output.json, "json"}}) {
        if (!flag) continue;
        if (!formats.empty()) formats += ",";
        formats += name;
    }
    out << "formats = " << formats << "\n\n"
        << "[analysis]\n"
        << "lemma1 = " << on(c.analysis.lemma1) << "\n"
        << "h2 = " << on(c.analysis.h2) << "\n"
        << "lyapunov = " << on(c.analysis.lyapunov) << "\n"
        << "lyapunov_m = " << c.analysis.lyapunov_m << "\n"
        << "reorth_period = " << c.analysis.reorth_period << "\n"
        << "lyapunov_transient = " << fmt_real(c.analysis.lyapunov_transient) << "\n"
        << "lyapunov_time = " << fmt_real(c.analysis.lyapunov_time) << "\n"
        << "theory = " << on(c.analysis.theory) << "\n"
        << "theory_C = " << fmt_real(c.analysis.theory_C) << "\n"
        << "slack = " << (c.analysis.slack ? fmt_real(*c.analysis.slack) : std::string("auto")) << "\n";
    return out.str();
}

}  // namespace nlsh
