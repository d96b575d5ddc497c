#include "whw/config.hpp"

#include <fstream>
#include <sstream>

#include "whw/errors.hpp"

namespace whw {

void RunConfig::validate() const {
    if (mesh_n < 8) throw ConfigError("mesh must be >= 8");
    if (system == SystemKind::half_B && mesh_n % 2 != 0)
        throw ConfigError("half system needs an even mesh");
    if (t_final < 0.0) throw ConfigError("t_final must be >= 0");
    if (!(s_min > 0.0) || !(s_max > s_min)) throw ConfigError("need 0 < s_min < s_max");
    if (points < 1) throw ConfigError("points must be >= 1");
    if (spacing != "log" && spacing != "linear") throw ConfigError("spacing must be log or linear");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
    if (fit_t_start <= 0.0) throw ConfigError("fit_t_start must be > 0");
    if (!(clearance_floor > 0.0)) throw ConfigError("clearance_floor must be > 0");
    if (dt < 0.0) throw ConfigError("dt must be >= 0 (0 selects spacing/2)");
    region.validate();
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + key + "': " + v);
    }
}

long to_long(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long d = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for '" + key + "': " + v);
    }
}

} // namespace

RunConfig apply_config_text(const std::string& text, RunConfig cfg) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "system") {
            if (val == "full") cfg.system = SystemKind::full_A;
            else if (val == "half") cfg.system = SystemKind::half_B;
            else throw ConfigError("system must be full or half");
        } else if (key == "mesh") {
            cfg.mesh_n = static_cast<int>(to_long(key, val));
        } else if (key == "dt") {
            cfg.dt = to_double(key, val);
        } else if (key == "t_final") {
            cfg.t_final = to_double(key, val);
        } else if (key == "profile") {
            cfg.profile = val;
        } else if (key == "s_min") {
            cfg.s_min = to_double(key, val);
        } else if (key == "s_max") {
            cfg.s_max = to_double(key, val);
        } else if (key == "points") {
            cfg.points = static_cast<int>(to_long(key, val));
        } else if (key == "spacing") {
            cfg.spacing = val;
        } else if (key == "region") {
            std::istringstream rs(val);
            std::string tok;
            double vals[4];
            for (int i = 0; i < 4; ++i) {
                if (!std::getline(rs, tok, ',')) throw ConfigError("region needs 4 comma-separated numbers");
                vals[i] = to_double(key, trim(tok));
            }
            if (std::getline(rs, tok, ',')) throw ConfigError("region needs exactly 4 numbers");
            cfg.region.re_min = vals[0];
            cfg.region.re_max = vals[1];
            cfg.region.im_min = vals[2];
            cfg.region.im_max = vals[3];
        } else if (key == "fit_t_start") {
            cfg.fit_t_start = to_double(key, val);
        } else if (key == "clearance_floor") {
            cfg.clearance_floor = to_double(key, val);
        } else if (key == "out") {
            cfg.out_dir = val;
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(to_long(key, val));
        } else if (key == "jobs") {
            cfg.jobs = static_cast<int>(to_long(key, val));
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return apply_config_text(ss.str(), std::move(base));
}

} // namespace whw
