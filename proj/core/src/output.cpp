#include "mfg/output.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mfg/error.hpp"

namespace mfg {

namespace pt = boost::property_tree;

std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"grid", {"dim", "lx", "ly", "nx", "ny"}},
        {"physics", {"nu", "T"}},
        {"kappa", {"kind", "kappa0", "r_max", "kappa_min", "c"}},
        {"data",
         {"rho0", "rho0_amplitude", "rho0_center_x", "rho0_center_y", "rho0_radius", "psi", "psi_amplitude", "drift",
          "drift_vx", "drift_vy", "drift_speed"}},
        {"scheme",
         {"dt", "theta", "tol_fp", "max_outer", "init", "grad_floor", "stationary_tol", "stationary_max_time",
          "snapshot_times"}},
        {"diagnostics",
         {"checks", "identity_tol", "rho_decay_tol", "phi_decay_tol", "h1_factor", "r2_min", "window_fraction", "reg_p",
          "reg_t1", "reg_t2", "reg_a", "reg_cap", "reg_tol_lin", "stationary_err_factor", "rho_lower_tol",
          "phi_lower_tol", "phi_upper_tol"}},
    };
    return keys;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    if (trim(s).empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    const std::string* raw(const std::string& section, const std::string& key) const {
        const auto sec = tree_.find(section);
        if (sec == tree_.not_found()) return nullptr;
        const auto it = sec->second.find(key);
        if (it == sec->second.not_found()) return nullptr;
        return &it->second.data();
    }

    void read(const std::string& section, const std::string& key, double& out) const {
        const std::string* v = raw(section, key);
        if (v) out = to_double(*v, section, key);
    }

    void read(const std::string& section, const std::string& key, int& out) const {
        const std::string* v = raw(section, key);
        if (!v) return;
        const std::string s = trim(*v);
        int x = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
            throw ConfigError(name(section, key), "expected an integer, got '" + s + "'");
        }
        out = x;
    }

    void read(const std::string& section, const std::string& key, std::vector<double>& out) const {
        const std::string* v = raw(section, key);
        if (!v) return;
        out.clear();
        for (const auto& item : split_list(*v)) out.push_back(to_double(item, section, key));
    }

    template <class Enum, std::size_t N>
    void read_enum(const std::string& section, const std::string& key, Enum& out,
                   const std::array<Enum, N>& options) const {
        const std::string* v = raw(section, key);
        if (!v) return;
        const std::string s = trim(*v);
        std::string known;
        for (Enum e : options) {
            if (to_string(e) == s) {
                out = e;
                return;
            }
            known += (known.empty() ? "" : ", ") + to_string(e);
        }
        throw ConfigError(name(section, key), "unknown value '" + s + "' (expected one of: " + known + ")");
    }

    static std::string name(const std::string& section, const std::string& key) {
        return "[" + section + "]." + key;
    }

private:
    static double to_double(const std::string& text, const std::string& section, const std::string& key) {
        const std::string s = trim(text);
        double x = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
        if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
            throw ConfigError(name(section, key), "expected a number, got '" + s + "'");
        }
        return x;
    }

    const pt::ptree& tree_;
};

void reject_unknown(const pt::ptree& tree) {
    const auto& allowed = allowed_keys();
    for (const auto& [section, body] : tree) {
        const auto it = allowed.find(section);
        if (it == allowed.end()) {
            if (body.empty()) throw ConfigError(section, "key outside any section");
            throw ConfigError("[" + section + "]", "unknown section");
        }
        for (const auto& [key, value] : body) {
            if (!it->second.count(key)) throw ConfigError(Reader::name(section, key), "unknown key");
        }
    }
}

MfgConfig from_tree(const pt::ptree& tree) {
    reject_unknown(tree);
    const Reader r(tree);
    MfgConfig c;

    r.read("grid", "dim", c.grid.dim);
    r.read("grid", "lx", c.grid.lx);
    r.read("grid", "ly", c.grid.ly);
    r.read("grid", "nx", c.grid.nx);
    r.read("grid", "ny", c.grid.ny);

    r.read("physics", "nu", c.nu);
    r.read("physics", "T", c.T);

    KappaModel::Kind kind = KappaModel::Kind::constant;
    if (const std::string* v = r.raw("kappa", "kind")) kind = kappa_kind_from_string(trim(*v));
    double kappa0 = 1.0;
    double r_max = 1.0;
    double kappa_min = 0.1;
    double cc = 1.0;
    r.read("kappa", "kappa0", kappa0);
    r.read("kappa", "r_max", r_max);
    r.read("kappa", "kappa_min", kappa_min);
    r.read("kappa", "c", cc);
    try {
        c.kappa = KappaModel::make(kind, kappa0, r_max, kappa_min, cc);
    } catch (const PreconditionError& e) {
        throw ConfigError("[kappa]", e.what());
    }

    using DK = DensitySpec::Kind;
    using FK = FinalDatumSpec::Kind;
    using VK = DriftSpec::Kind;
    r.read_enum("data", "rho0", c.rho0.kind, std::array{DK::zero, DK::bump, DK::sine, DK::constant});
    r.read("data", "rho0_amplitude", c.rho0.amplitude);
    r.read("data", "rho0_center_x", c.rho0.center_x);
    r.read("data", "rho0_center_y", c.rho0.center_y);
    r.read("data", "rho0_radius", c.rho0.radius);
    r.read_enum("data", "psi", c.psi.kind, std::array{FK::zero, FK::stationary, FK::torsion, FK::bump});
    r.read("data", "psi_amplitude", c.psi.amplitude);
    r.read_enum("data", "drift", c.drift.kind, std::array{VK::zero, VK::constant, VK::inward, VK::outward});
    r.read("data", "drift_vx", c.drift.vx);
    r.read("data", "drift_vy", c.drift.vy);
    r.read("data", "drift_speed", c.drift.speed);

    r.read("scheme", "dt", c.scheme.dt);
    r.read("scheme", "theta", c.scheme.theta);
    r.read("scheme", "tol_fp", c.scheme.tol_fp);
    r.read("scheme", "max_outer", c.scheme.max_outer);
    r.read_enum("scheme", "init", c.scheme.init, std::array{InitKind::uncongested, InitKind::zero});
    r.read("scheme", "grad_floor", c.scheme.grad_floor);
    r.read("scheme", "stationary_tol", c.scheme.stationary_tol);
    r.read("scheme", "stationary_max_time", c.scheme.stationary_max_time);
    r.read("scheme", "snapshot_times", c.scheme.snapshot_times);

    auto& d = c.diagnostics;
    if (const std::string* v = r.raw("diagnostics", "checks")) {
        d.checks = split_list(*v);
    } else if (c.grid.dim != 1) {
        std::erase(d.checks, std::string("stationary_oracle"));
    }
    r.read("diagnostics", "identity_tol", d.identity_tol);
    r.read("diagnostics", "rho_decay_tol", d.rho_decay_tol);
    r.read("diagnostics", "phi_decay_tol", d.phi_decay_tol);
    r.read("diagnostics", "h1_factor", d.h1_factor);
    r.read("diagnostics", "r2_min", d.r2_min);
    r.read("diagnostics", "window_fraction", d.window_fraction);
    r.read("diagnostics", "reg_p", d.reg_p);
    r.read("diagnostics", "reg_t1", d.reg_t1);
    r.read("diagnostics", "reg_t2", d.reg_t2);
    r.read("diagnostics", "reg_a", d.reg_a);
    r.read("diagnostics", "reg_cap", d.reg_cap);
    r.read("diagnostics", "reg_tol_lin", d.reg_tol_lin);
    r.read("diagnostics", "stationary_err_factor", d.stationary_err_factor);
    r.read("diagnostics", "rho_lower_tol", d.rho_lower_tol);
    r.read("diagnostics", "phi_lower_tol", d.phi_lower_tol);
    r.read("diagnostics", "phi_upper_tol", d.phi_upper_tol);

    c.validate();
    return c;
}

MfgConfig parse_stream(std::istream& in, const std::string& origin) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(origin, "line " + std::to_string(e.line()) + ": " + e.message());
    }
    return from_tree(tree);
}

std::string join(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + format_double(xs[i]);
    return s;
}

std::string join(const std::vector<std::string>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i];
    return s;
}

}  // namespace

MfgConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), "cannot open config file");
    return parse_stream(in, path.string());
}

MfgConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_stream(in, "<string>");
}

std::string serialize_config(const MfgConfig& c) {
    std::ostringstream o;
    const auto kv = [&o](const char* key, const std::string& value) { o << key << " = " << value << '\n'; };
    const auto num = [&kv](const char* key, double v) { kv(key, format_double(v)); };

    o << "[grid]\n";
    kv("dim", std::to_string(c.grid.dim));
    num("lx", c.grid.lx);
    num("ly", c.grid.ly);
    kv("nx", std::to_string(c.grid.nx));
    kv("ny", std::to_string(c.grid.ny));

    o << "\n[physics]\n";
    num("nu", c.nu);
    num("T", c.T);

    o << "\n[kappa]\n";
    kv("kind", to_string(c.kappa.kind()));
    num("kappa0", c.kappa.kappa0());
    num("r_max", c.kappa.r_max());
    num("kappa_min", c.kappa.kappa_min());
    num("c", c.kappa.c());

    o << "\n[data]\n";
    kv("rho0", to_string(c.rho0.kind));
    num("rho0_amplitude", c.rho0.amplitude);
    num("rho0_center_x", c.rho0.center_x);
    num("rho0_center_y", c.rho0.center_y);
    num("rho0_radius", c.rho0.radius);
    kv("psi", to_string(c.psi.kind));
    num("psi_amplitude", c.psi.amplitude);
    kv("drift", to_string(c.drift.kind));
    num("drift_vx", c.drift.vx);
    num("drift_vy", c.drift.vy);
    num("drift_speed", c.drift.speed);

    o << "\n[scheme]\n";
    num("dt", c.scheme.dt);
    num("theta", c.scheme.theta);
    num("tol_fp", c.scheme.tol_fp);
    kv("max_outer", std::to_string(c.scheme.max_outer));
    kv("init", to_string(c.scheme.init));
    num("grad_floor", c.scheme.grad_floor);
    num("stationary_tol", c.scheme.stationary_tol);
    num("stationary_max_time", c.scheme.stationary_max_time);
    kv("snapshot_times", join(c.scheme.snapshot_times));

    const auto& d = c.diagnostics;
    o << "\n[diagnostics]\n";
    kv("checks", join(d.checks));
    num("identity_tol", d.identity_tol);
    num("rho_decay_tol", d.rho_decay_tol);
    num("phi_decay_tol", d.phi_decay_tol);
    num("h1_factor", d.h1_factor);
    num("r2_min", d.r2_min);
    num("window_fraction", d.window_fraction);
    num("reg_p", d.reg_p);
    num("reg_t1", d.reg_t1);
    num("reg_t2", d.reg_t2);
    num("reg_a", d.reg_a);
    num("reg_cap", d.reg_cap);
    num("reg_tol_lin", d.reg_tol_lin);
    num("stationary_err_factor", d.stationary_err_factor);
    num("rho_lower_tol", d.rho_lower_tol);
    num("phi_lower_tol", d.phi_lower_tol);
    num("phi_upper_tol", d.phi_upper_tol);
    return o.str();
}

std::uint64_t config_hash(const MfgConfig& config) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : serialize_config(config)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string series_csv(const RunRecord& r) {
    r.validate();
    std::string s = "t,mass,coupling,rho_l1,rho_l2,rho_linf,phierr_linf,phierr_h1,residual\n";
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        for (double v : {r.times[k], r.mass[k], r.coupling[k], r.rho_l1[k], r.rho_l2[k], r.rho_linf[k],
                         r.phierr_linf[k], r.phierr_h1[k]}) {
            s += format_double(v);
            s += ',';
        }
        s += format_double(r.residual[k]);
        s += '\n';
    }
    return s;
}

std::string fields_csv(const std::vector<std::string>& names, const std::vector<const ScalarField*>& fields) {
    if (fields.empty() || names.size() != fields.size()) throw PreconditionError("fields_csv: names and fields differ");
    const Grid& g = fields.front()->grid();
    std::string s = g.dim() == 1 ? "x" : "x,y";
    for (const auto& n : names) s += "," + n;
    s += '\n';
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto p = g.position(i);
        s += format_double(p[0]);
        if (g.dim() == 2) s += "," + format_double(p[1]);
        for (const ScalarField* f : fields) {
            require_same_grid(f->grid(), g, "fields_csv");
            s += "," + format_double((*f)[i]);
        }
        s += '\n';
    }
    return s;
}

std::string snapshot_csv(const RunRecord::Snapshot& snap) {
    const Grid& g = snap.rho.grid();
    std::vector<ScalarField> comps;
    for (int k = 0; k < g.dim(); ++k) {
        auto c = snap.V.component(k);
        comps.emplace_back(g, std::vector<double>(c.begin(), c.end()));
    }
    std::vector<std::string> names = {"rho", "phi"};
    std::vector<const ScalarField*> fields = {&snap.rho, &snap.phi};
    const char* vnames[] = {"vx", "vy"};
    for (int k = 0; k < g.dim(); ++k) {
        names.emplace_back(vnames[k]);
        fields.push_back(&comps[static_cast<std::size_t>(k)]);
    }
    return fields_csv(names, fields);
}

std::string snapshot_file_name(double t) { return "snapshot_" + format_double(t) + ".csv"; }

std::string report_text(const Report& report) {
    std::string s;
    for (const auto& c : report.checks) s += format_check(c) + '\n';
    for (const auto& [name, f] : report.fits) {
        s += "FIT " + name + " alpha=" + format_double(f.alpha) + " c=" + format_double(f.c) +
             " r2=" + format_double(f.r2) + " window=[" + format_double(f.t_lo) + "," + format_double(f.t_hi) +
             "] samples=" + std::to_string(f.samples) + '\n';
    }
    for (const auto& n : report.notes) s += "NOTE " + n + '\n';
    return s;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw Error("write to '" + path.string() + "' failed");
}

void write_record(const std::filesystem::path& dir, const RunRecord& record) {
    write_text(dir / "series.csv", series_csv(record));
    for (const auto& snap : record.snapshots) write_text(dir / snapshot_file_name(snap.t), snapshot_csv(snap));
}

}  // namespace mfg
