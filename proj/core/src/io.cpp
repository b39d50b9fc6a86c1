#include "volhedge/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "volhedge/errors.hpp"

namespace volhedge {

namespace {

using nlohmann::json;

json parse_json_text(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        throw InputError(what + ": invalid JSON");
    }
    return j;
}

void reject_unknown_keys(const json& j, const std::vector<std::string>& known,
                         const std::string& what) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const auto& k : known) {
            if (it.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) throw InputError(what + ": unknown key '" + it.key() + "'");
    }
}

double get_number(const json& j, const std::string& key, const std::string& what) {
    if (!j.contains(key)) throw InputError(what + ": missing key '" + key + "'");
    if (!j[key].is_number()) {
        throw InputError(what + ": key '" + key + "' must be a number");
    }
    const double v = j[key].get<double>();
    if (!std::isfinite(v)) {
        throw InputError(what + ": key '" + key + "' must be finite");
    }
    return v;
}

double parse_strict_double(std::string_view field, int row, const char* name) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) {
        throw InputError("smile csv row " + std::to_string(row) + ": bad " +
                         name + " field '" + std::string(field) + "'");
    }
    if (!std::isfinite(value) || value <= 0.0) {
        throw InputError("smile csv row " + std::to_string(row) + ": " + name +
                         " must be finite and positive");
    }
    return value;
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path);
    out << content;
}

MarketSmile load_smile_csv(const std::string& csv_path,
                           const std::string& meta_path) {
    const json meta = parse_json_text(read_text_file(meta_path), "smile meta");
    reject_unknown_keys(meta, {"spot", "t", "T"}, "smile meta");
    const double spot = get_number(meta, "spot", "smile meta");
    const double t = get_number(meta, "t", "smile meta");
    const double T = get_number(meta, "T", "smile meta");
    if (spot <= 0.0) throw InputError("smile meta: spot must be positive");
    if (t < 0.0 || !(T > t)) throw InputError("smile meta: requires 0 <= t < T");

    std::ifstream in(csv_path);
    if (!in) throw InputError("cannot open file: " + csv_path);
    std::string line;
    if (!std::getline(in, line)) throw InputError("smile csv: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "strike,implied_vol") {
        throw InputError("smile csv: header must be 'strike,implied_vol'");
    }
    std::vector<SmileQuote> quotes;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos ||
            line.find(',', comma + 1) != std::string::npos) {
            throw InputError("smile csv row " + std::to_string(row) +
                             ": expected exactly two fields");
        }
        const double strike = parse_strict_double(
            std::string_view(line).substr(0, comma), row, "strike");
        const double vol = parse_strict_double(
            std::string_view(line).substr(comma + 1), row, "implied_vol");
        quotes.push_back({strike, vol});
    }
    return MarketSmile(t, T, spot, std::move(quotes));
}

void save_smile_csv(const MarketSmile& smile, const std::string& csv_path,
                    const std::string& meta_path) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "strike,implied_vol\n";
    for (const auto& q : smile.quotes()) {
        csv << q.strike << "," << q.vol << "\n";
    }
    write_text_file(csv_path, csv.str());
    json meta;
    meta["spot"] = smile.spot();
    meta["t"] = smile.t();
    meta["T"] = smile.T();
    write_text_file(meta_path, meta.dump(2) + "\n");
}

SvModelSpec parse_model_spec_json(const std::string& text) {
    const json j = parse_json_text(text, "model spec");
    if (!j.contains("model") || !j["model"].is_string()) {
        throw InputError("model spec: missing string key 'model'");
    }
    const std::string model = j["model"].get<std::string>();
    if (model == "heston") {
        reject_unknown_keys(
            j, {"model", "kappa", "theta", "xi", "v0", "rho", "spot"},
            "model spec");
        HestonParams p;
        p.kappa = get_number(j, "kappa", "model spec");
        p.theta = get_number(j, "theta", "model spec");
        p.xi = get_number(j, "xi", "model spec");
        p.v0 = get_number(j, "v0", "model spec");
        return SvModelSpec::heston(p, get_number(j, "rho", "model spec"),
                                   get_number(j, "spot", "model spec"));
    }
    if (model == "lognormal_sabr") {
        reject_unknown_keys(j, {"model", "alpha", "sigma0", "rho", "spot"},
                            "model spec");
        LognormalSabrParams p;
        p.alpha = get_number(j, "alpha", "model spec");
        p.sigma0 = get_number(j, "sigma0", "model spec");
        return SvModelSpec::lognormal_sabr(p, get_number(j, "rho", "model spec"),
                                           get_number(j, "spot", "model spec"));
    }
    if (model == "three_halves") {
        reject_unknown_keys(
            j, {"model", "kappa", "theta", "xi", "v0", "rho", "spot"},
            "model spec");
        ThreeHalvesParams p;
        p.kappa = get_number(j, "kappa", "model spec");
        p.theta = get_number(j, "theta", "model spec");
        p.xi = get_number(j, "xi", "model spec");
        p.v0 = get_number(j, "v0", "model spec");
        return SvModelSpec::three_halves(p, get_number(j, "rho", "model spec"),
                                         get_number(j, "spot", "model spec"));
    }
    throw InputError("model spec: unknown model '" + model + "'");
}

SvModelSpec load_model_spec(const std::string& path) {
    return parse_model_spec_json(read_text_file(path));
}

std::string model_spec_to_json_string(const SvModelSpec& spec, int indent) {
    json j;
    switch (spec.variant()) {
        case SvVariant::Heston: {
            const auto& p = spec.heston_params();
            j["model"] = "heston";
            j["kappa"] = p.kappa;
            j["theta"] = p.theta;
            j["xi"] = p.xi;
            j["v0"] = p.v0;
            break;
        }
        case SvVariant::LognormalSabr: {
            const auto& p = spec.sabr_params();
            j["model"] = "lognormal_sabr";
            j["alpha"] = p.alpha;
            j["sigma0"] = p.sigma0;
            break;
        }
        case SvVariant::ThreeHalves: {
            const auto& p = spec.three_halves_params();
            j["model"] = "three_halves";
            j["kappa"] = p.kappa;
            j["theta"] = p.theta;
            j["xi"] = p.xi;
            j["v0"] = p.v0;
            break;
        }
    }
    j["rho"] = spec.rho();
    j["spot"] = spec.spot0();
    return j.dump(indent);
}

namespace {

void write_doubles(std::ofstream& out, const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> read_doubles(std::ifstream& in, std::size_t count,
                                 const std::string& what) {
    std::vector<double> v(count);
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw InputError("pathset binary truncated while reading " + what);
    return v;
}

}  // namespace

void save_pathset(const PathSet& paths, const std::string& prefix) {
    if (!paths.has_panel()) {
        throw ConfigError("save_pathset: sigma panel was not stored");
    }
    json desc;
    desc["spec"] = json::parse(model_spec_to_json_string(paths.spec, -1));
    desc["t"] = paths.t;
    desc["T"] = paths.T;
    desc["steps_per_year"] = paths.steps_per_year;
    desc["seed"] = paths.seed;
    desc["n_paths"] = paths.n_paths();
    desc["grid_size"] = paths.time_grid.size();
    write_text_file(prefix + ".json", desc.dump(2) + "\n");

    std::ofstream bin(prefix + ".bin", std::ios::binary);
    if (!bin) throw InputError("cannot write file: " + prefix + ".bin");
    write_doubles(bin, paths.time_grid);
    write_doubles(bin, paths.integrated_var);
    write_doubles(bin, paths.mixing_m);
    write_doubles(bin, paths.mixing_vol);
    write_doubles(bin, paths.final_sigma);
    write_doubles(bin, paths.sigma_panel);
}

PathSet load_pathset(const std::string& prefix) {
    const json desc =
        parse_json_text(read_text_file(prefix + ".json"), "pathset descriptor");
    reject_unknown_keys(
        desc, {"spec", "t", "T", "steps_per_year", "seed", "n_paths", "grid_size"},
        "pathset descriptor");
    PathSet out;
    out.spec = parse_model_spec_json(desc.at("spec").dump());
    out.t = get_number(desc, "t", "pathset descriptor");
    out.T = get_number(desc, "T", "pathset descriptor");
    out.steps_per_year = desc.at("steps_per_year").get<int>();
    out.seed = desc.at("seed").get<std::uint64_t>();
    const auto n_paths = desc.at("n_paths").get<std::size_t>();
    const auto grid_size = desc.at("grid_size").get<std::size_t>();

    std::ifstream bin(prefix + ".bin", std::ios::binary);
    if (!bin) throw InputError("cannot open file: " + prefix + ".bin");
    out.time_grid = read_doubles(bin, grid_size, "time grid");
    out.integrated_var = read_doubles(bin, n_paths, "integrated variance");
    out.mixing_m = read_doubles(bin, n_paths, "mixing factor");
    out.mixing_vol = read_doubles(bin, n_paths, "mixing vol");
    out.final_sigma = read_doubles(bin, n_paths, "final sigma");
    out.sigma_panel = read_doubles(bin, n_paths * grid_size, "sigma panel");
    return out;
}

}  // namespace volhedge
