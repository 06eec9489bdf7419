#include "iaspa/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

#include "iaspa/errors.hpp"
#include "iaspa/field_io.hpp"

namespace iaspa {

namespace {

struct Item {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
};

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<Item> tokenize(std::istream& in, const std::string& name) {
    std::vector<Item> items;
    std::string section, line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError(name + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(name + ":" + std::to_string(lineno) + ": expected key = value");
        Item it;
        it.section = section;
        it.key = trim(line.substr(0, eq));
        it.value = trim(line.substr(eq + 1));
        it.line = lineno;
        if (it.key.empty())
            throw ParseError(name + ":" + std::to_string(lineno) + ": empty key");
        items.push_back(std::move(it));
    }
    return items;
}

double parse_double(const Item& it, const std::string& name) {
    try {
        std::size_t used = 0;
        const double v = std::stod(it.value, &used);
        if (used != it.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(name + ":" + std::to_string(it.line) + ": '" + it.key +
                         "' expects a number, got '" + it.value + "'");
    }
}

long long parse_int(const Item& it, const std::string& name) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(it.value, &used);
        if (used != it.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(name + ":" + std::to_string(it.line) + ": '" + it.key +
                         "' expects an integer, got '" + it.value + "'");
    }
}

bool parse_bool(const Item& it, const std::string& name) {
    if (it.value == "true" || it.value == "1") return true;
    if (it.value == "false" || it.value == "0") return false;
    throw ParseError(name + ":" + std::to_string(it.line) + ": '" + it.key +
                     "' expects true/false");
}

// "x,y" pairs separated by whitespace.
std::vector<Vec2> parse_points(const std::string& text, const Item& it, const std::string& name) {
    std::vector<Vec2> pts;
    std::istringstream iss(text);
    std::string tok;
    while (iss >> tok) {
        const auto comma = tok.find(',');
        if (comma == std::string::npos)
            throw ParseError(name + ":" + std::to_string(it.line) + ": expected x,y pair, got '" +
                             tok + "'");
        try {
            pts.push_back({std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1))});
        } catch (const std::exception&) {
            throw ParseError(name + ":" + std::to_string(it.line) + ": bad coordinate '" + tok + "'");
        }
    }
    return pts;
}

constexpr double kDegToRad = 3.141592653589793238462643383279502884 / 180.0;

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& name,
                        const std::filesystem::path& base_dir,
                        const std::vector<std::string>& overrides) {
    std::vector<Item> items = tokenize(in, name);

    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        const auto dotpos = ov.find('.');
        if (eq == std::string::npos || dotpos == std::string::npos || dotpos > eq)
            throw ParseError("override '" + ov + "' must look like section.key=value");
        Item it;
        it.section = ov.substr(0, dotpos);
        it.key = ov.substr(dotpos + 1, eq - dotpos - 1);
        it.value = ov.substr(eq + 1);
        it.line = 0;
        // Replace an existing single-valued key, else append.
        auto match = std::find_if(items.begin(), items.end(), [&](const Item& x) {
            return x.section == it.section && x.key == it.key;
        });
        if (match != items.end())
            match->value = it.value;
        else
            items.push_back(std::move(it));
    }

    Scenario sc;
    sc.base_dir = base_dir;
    bool have_bounds = false, have_spacing = false;

    for (const Item& it : items) {
        const std::string& s = it.section;
        auto unknown = [&]() {
            throw ParseError(name + ":" + std::to_string(it.line) + ": unknown key '" + it.key +
                             "' in section [" + s + "]");
        };
        if (s == "bounds") {
            have_bounds = true;
            if (it.key == "min_x") sc.scene.bounds.min_x = parse_double(it, name);
            else if (it.key == "min_y") sc.scene.bounds.min_y = parse_double(it, name);
            else if (it.key == "max_x") sc.scene.bounds.max_x = parse_double(it, name);
            else if (it.key == "max_y") sc.scene.bounds.max_y = parse_double(it, name);
            else unknown();
        } else if (s == "grid") {
            if (it.key == "spacing") {
                sc.scene.grid_spacing = parse_double(it, name);
                have_spacing = true;
            } else if (it.key == "receiver_height") {
                sc.scene.receiver_height = parse_double(it, name);
            } else unknown();
        } else if (s == "materials") {
            sc.scene.materials.db_per_meter[it.key] = parse_double(it, name);
        } else if (s == "buildings") {
            if (it.key != "building") unknown();
            // building = <material> <height> x1,y1 x2,y2 ...
            std::istringstream iss(it.value);
            Building b;
            if (!(iss >> b.material >> b.height))
                throw ParseError(name + ":" + std::to_string(it.line) +
                                 ": building expects '<material> <height> x,y x,y ...'");
            std::string rest;
            std::getline(iss, rest);
            b.footprint = Polygon(parse_points(rest, it, name));
            sc.scene.buildings.push_back(std::move(b));
        } else if (s == "candidates") {
            if (it.key == "mount_height") sc.candidates.mount_height = parse_double(it, name);
            else if (it.key == "lattice_pitch") sc.candidates.lattice_pitch = parse_double(it, name);
            else if (it.key == "site") {
                const auto pts = parse_points(it.value, it, name);
                if (pts.size() != 1)
                    throw ParseError(name + ":" + std::to_string(it.line) +
                                     ": site expects a single x,y pair");
                sc.candidates.explicit_sites.push_back(pts[0]);
            } else unknown();
        } else if (s == "exclusions") {
            if (it.key == "ellipse") {
                // ellipse = cx,cy <semi_a> <semi_b> [angle_deg]
                std::istringstream iss(it.value);
                std::string center_tok;
                Ellipse e;
                double angle_deg = 0.0;
                if (!(iss >> center_tok >> e.semi_a >> e.semi_b))
                    throw ParseError(name + ":" + std::to_string(it.line) +
                                     ": ellipse expects 'cx,cy semi_a semi_b [angle_deg]'");
                iss >> angle_deg;
                const auto c = parse_points(center_tok, it, name);
                if (c.size() != 1 || !(e.semi_a > 0) || !(e.semi_b > 0))
                    throw ParseError(name + ":" + std::to_string(it.line) + ": bad ellipse");
                e.center = c[0];
                e.angle_rad = angle_deg * kDegToRad;
                sc.candidates.exclusions.emplace_back(e);
            } else if (it.key == "polygon") {
                Polygon p(parse_points(it.value, it, name));
                if (p.size() < 3)
                    throw ParseError(name + ":" + std::to_string(it.line) +
                                     ": exclusion polygon needs >= 3 vertices");
                p.normalize_orientation();
                sc.candidates.exclusions.emplace_back(std::move(p));
            } else unknown();
        } else if (s == "priority") {
            if (it.key != "density") unknown();
            std::istringstream iss(it.value);
            std::string kind;
            iss >> kind;
            if (kind == "uniform") {
                sc.objective.priority.uniform = true;
            } else if (kind == "raster") {
                std::string path;
                iss >> path;
                if (path.empty())
                    throw ParseError(name + ":" + std::to_string(it.line) +
                                     ": density raster needs a path");
                sc.objective.priority.uniform = false;
                sc.objective.priority.raster_path = path;
            } else {
                throw ParseError(name + ":" + std::to_string(it.line) +
                                 ": density must be 'uniform' or 'raster <path>'");
            }
        } else if (s == "objective") {
            if (it.key == "mode") {
                if (it.value == "max") sc.objective.mode = AggMode::Max;
                else if (it.value == "sum") sc.objective.mode = AggMode::Sum;
                else throw ParseError(name + ":" + std::to_string(it.line) +
                                      ": mode must be max or sum");
            } else if (it.key == "weight_family") {
                if (it.value == "log1p") sc.objective.family = WeightFamily::Log1p;
                else if (it.value == "saturating") sc.objective.family = WeightFamily::Saturating;
                else if (it.value == "table") sc.objective.family = WeightFamily::CustomTable;
                else throw ParseError(name + ":" + std::to_string(it.line) +
                                      ": weight_family must be log1p, saturating or table");
            } else if (it.key == "saturating_c") {
                sc.objective.saturating_c = parse_double(it, name);
            } else if (it.key == "weight_table") {
                // weight_table = x:y x:y ...
                std::istringstream iss(it.value);
                std::string tok;
                while (iss >> tok) {
                    const auto colon = tok.find(':');
                    if (colon == std::string::npos)
                        throw ParseError(name + ":" + std::to_string(it.line) +
                                         ": weight_table expects x:y pairs");
                    sc.objective.table.emplace_back(std::stod(tok.substr(0, colon)),
                                                    std::stod(tok.substr(colon + 1)));
                }
            } else unknown();
        } else if (s == "radio") {
            if (it.key == "carrier_frequency_hz") sc.radio.carrier_frequency_hz = parse_double(it, name);
            else if (it.key == "tx_power_dbm") sc.radio.tx_power_dbm = parse_double(it, name);
            else if (it.key == "bandwidth_hz") sc.radio.bandwidth_hz = parse_double(it, name);
            else if (it.key == "gap_gamma") sc.radio.gap_gamma = parse_double(it, name);
            else if (it.key == "min_distance_m") sc.radio.min_distance_m = parse_double(it, name);
            else unknown();
        } else if (s == "optimizer") {
            sc.optimizer.present = true;
            if (it.key == "epsilon") sc.optimizer.epsilon = parse_double(it, name);
            else if (it.key == "budget") sc.optimizer.budget = static_cast<int>(parse_int(it, name));
            else if (it.key == "coverage_target") sc.optimizer.coverage_target = parse_double(it, name);
            else if (it.key == "seed") sc.optimizer.seed = static_cast<std::uint64_t>(parse_int(it, name));
            else if (it.key == "lazy") sc.optimizer.lazy = parse_bool(it, name);
            else if (it.key == "fixed_sites") {
                std::istringstream iss(it.value);
                int idx;
                while (iss >> idx) sc.optimizer.fixed_sites.push_back(idx);
                if (!iss.eof())
                    throw ParseError(name + ":" + std::to_string(it.line) +
                                     ": fixed_sites expects a list of indices");
            } else unknown();
        } else {
            throw ParseError(name + ":" + std::to_string(it.line) + ": unknown section [" + s + "]");
        }
    }

    if (!have_bounds) throw ParseError(name + ": missing [bounds] section");
    if (!have_spacing) throw ParseError(name + ": missing grid spacing");
    validate_scene(sc.scene);
    validate_radio(sc.radio);
    if (sc.optimizer.budget && sc.optimizer.coverage_target)
        throw ParseError(name + ": budget and coverage_target are mutually exclusive");
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario " + path.string());
    return parse_scenario(in, path.string(), path.parent_path(), overrides);
}

Scene load_scene(const std::filesystem::path& path) { return load_scenario(path).scene; }

PlacementProblem build_problem(const Scenario& scenario, FieldCache* cache, int workers) {
    PlacementProblem p;
    p.scene = scenario.scene;
    p.grid = make_grid(p.scene);
    p.radio = scenario.radio;
    p.candidates = build_candidates(p.scene, scenario.candidates);
    p.fields = field_matrix(p.candidates, p.scene, p.grid, p.radio, cache, workers);

    p.objective.mode = scenario.objective.mode;
    p.objective.weight.family = scenario.objective.family;
    p.objective.weight.c = scenario.objective.saturating_c;
    p.objective.weight.table = scenario.objective.table;
    p.objective.weight.M = compute_M(p.fields, p.objective.mode);

    if (scenario.objective.priority.uniform) {
        p.objective.density = uniform_density(p.scene, p.grid);
    } else {
        auto path = scenario.objective.priority.raster_path;
        if (path.is_relative()) path = scenario.base_dir / path;
        LoadedRaster loaded = read_raster_auto(path, /*require_nonneg=*/true);
        require_grid_match(loaded.header, p.grid);
        p.objective.density = density_from_raster(std::move(loaded.raster));
    }
    p.hash = problem_hash(p);
    return p;
}

OptimizerConfig optimizer_config(const Scenario& scenario, int workers) {
    if (!scenario.optimizer.present)
        throw ValidationError("scenario has no [optimizer] section");
    const OptimizerSpec& o = scenario.optimizer;
    if (!o.budget && !o.coverage_target)
        throw ValidationError("optimizer needs exactly one of budget or coverage_target");
    OptimizerConfig cfg;
    cfg.epsilon = o.epsilon;
    if (o.budget) {
        cfg.termination = OptimizerConfig::Termination::Budget;
        cfg.budget_k = *o.budget;
    } else {
        cfg.termination = OptimizerConfig::Termination::Coverage;
        cfg.coverage_beta = *o.coverage_target;
    }
    cfg.seed = o.seed;
    cfg.fixed = o.fixed_sites;
    cfg.lazy = o.lazy;
    cfg.workers = workers;
    return cfg;
}

}  // namespace iaspa
