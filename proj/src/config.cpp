#include "whittle/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace whittle {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError(where + "." + it.key(), "unknown key");
}

double get_prob(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) throw ConfigError(where + "." + key, "missing");
    if (!obj[key].is_number()) throw ConfigError(where + "." + key, "must be a number");
    return obj[key].get<double>();
}

ArmKind parse_kind(const json& v, const std::string& where) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "A" || s == "a" || s == "normal") return ArmKind::TypeA;
        if (s == "B" || s == "b" || s == "viral") return ArmKind::TypeB;
    }
    throw ConfigError(where, "kind must be \"A\" or \"B\"");
}

ArmModel parse_arm(const json& obj, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where, "must be an object");
    require_keys(obj, where, {"kind", "variant", "p", "q", "rho0", "rho1"});
    if (!obj.contains("kind")) throw ConfigError(where + ".kind", "missing");
    const ArmKind kind = parse_kind(obj["kind"], where + ".kind");
    ModelVariant variant = ModelVariant::Base;
    if (obj.contains("variant")) {
        const std::string v = obj["variant"].get<std::string>();
        if (v == "base")
            variant = ModelVariant::Base;
        else if (v == "dual_speed_zero")
            variant = ModelVariant::DualSpeedZero;
        else
            throw ConfigError(where + ".variant", "must be \"base\" or \"dual_speed_zero\"");
    }
    const double p = get_prob(obj, where, "p");
    const double rho0 = get_prob(obj, where, "rho0");
    const double rho1 = get_prob(obj, where, "rho1");
    try {
        if (variant == ModelVariant::Base) {
            if (obj.contains("q")) throw ConfigError(where + ".q", "only valid for dual_speed_zero");
            ArmModel m;
            m.kind = kind;
            m.variant = variant;
            m.p = p;
            m.rho0 = rho0;
            m.rho1 = rho1;
            m.validate();
            return m;
        }
        return ArmModel::dual_speed_zero(kind, p, get_prob(obj, where, "q"), rho0, rho1);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where, e.what());
    }
}

PolicyKind parse_policy(const std::string& s, const std::string& where) {
    if (s == "whittle") return PolicyKind::Whittle;
    if (s == "myopic") return PolicyKind::Myopic;
    if (s == "random") return PolicyKind::UniformRandom;
    throw ConfigError(where, "must be \"whittle\", \"myopic\", \"random\" or \"both\"");
}

std::vector<double> parse_number_list(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) throw ConfigError(where, "must be a nonempty array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(where, "must contain only numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, const std::string& source_name) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source_name, std::string("not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError(source_name, "top level must be an object");
    require_keys(root, source_name,
                 {"schema_version", "arms", "generator", "initial_belief", "initial_beliefs",
                  "criterion", "policy", "horizon", "seeds", "output", "svg", "learning"});

    ExperimentConfig cfg;
    if (!root.contains("schema_version") || !root["schema_version"].is_number_integer())
        throw ConfigError("schema_version", "missing or not an integer");
    cfg.schema_version = root["schema_version"].get<int>();
    if (cfg.schema_version != 1) throw ConfigError("schema_version", "unsupported (expected 1)");

    if (root.contains("arms") == root.contains("generator"))
        throw ConfigError("arms", "exactly one of \"arms\" or \"generator\" is required");
    if (root.contains("arms")) {
        if (!root["arms"].is_array() || root["arms"].empty())
            throw ConfigError("arms", "must be a nonempty array");
        int i = 0;
        for (const auto& a : root["arms"])
            cfg.arms.push_back(parse_arm(a, "arms[" + std::to_string(i++) + "]"));
    } else {
        const auto& g = root["generator"];
        require_keys(g, "generator", {"n", "type_b", "seed"});
        GeneratorSpec spec;
        if (!g.contains("n") || !g["n"].is_number_integer())
            throw ConfigError("generator.n", "missing or not an integer");
        spec.n = g["n"].get<int>();
        spec.type_b = g.contains("type_b") ? g["type_b"].get<int>() : 0;
        spec.seed = g.contains("seed") ? g["seed"].get<std::uint64_t>() : 0;
        try {
            cfg.arms = generate_random_arms(spec.n, spec.type_b, spec.seed);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("generator", e.what());
        }
        cfg.generator = spec;
    }

    if (root.contains("initial_belief") && root.contains("initial_beliefs"))
        throw ConfigError("initial_belief", "give either the scalar or the list, not both");
    if (root.contains("initial_belief")) {
        const double b = root["initial_belief"].get<double>();
        cfg.initial_beliefs.assign(cfg.arms.size(), b);
    } else if (root.contains("initial_beliefs")) {
        cfg.initial_beliefs = parse_number_list(root["initial_beliefs"], "initial_beliefs");
        if (cfg.initial_beliefs.size() != cfg.arms.size())
            throw ConfigError("initial_beliefs", "length must match the number of arms");
    }
    for (double b : cfg.initial_beliefs)
        if (!(b >= 0.0 && b <= 1.0)) throw ConfigError("initial_beliefs", "entries must lie in [0,1]");

    if (root.contains("criterion")) {
        const auto& c = root["criterion"];
        if (c.is_string() && c.get<std::string>() == "average") {
            cfg.criterion = Criterion::average_reward();
        } else if (c.is_object()) {
            require_keys(c, "criterion", {"beta"});
            if (!c.contains("beta")) throw ConfigError("criterion.beta", "missing");
            try {
                cfg.criterion = Criterion::discounted(c["beta"].get<double>());
            } catch (const std::invalid_argument& e) {
                throw ConfigError("criterion.beta", e.what());
            }
        } else {
            throw ConfigError("criterion", "must be \"average\" or {\"beta\": x}");
        }
    }

    if (root.contains("policy")) {
        const std::string p = root["policy"].get<std::string>();
        if (p == "both")
            cfg.policies = {PolicyKind::Whittle, PolicyKind::Myopic};
        else
            cfg.policies = {parse_policy(p, "policy")};
    }

    if (root.contains("horizon")) {
        if (!root["horizon"].is_number_integer() || root["horizon"].get<long>() < 0)
            throw ConfigError("horizon", "must be a nonnegative integer");
        cfg.horizon = root["horizon"].get<long>();
    }

    if (root.contains("seeds")) {
        const auto& s = root["seeds"];
        if (s.is_array()) {
            for (const auto& x : s) {
                if (!x.is_number_integer()) throw ConfigError("seeds", "must be integers");
                cfg.seeds.push_back(x.get<std::uint64_t>());
            }
            if (cfg.seeds.empty()) throw ConfigError("seeds", "must be nonempty");
        } else if (s.is_object()) {
            require_keys(s, "seeds", {"count", "base"});
            if (!s.contains("count")) throw ConfigError("seeds.count", "missing");
            const long count = s["count"].get<long>();
            if (count <= 0) throw ConfigError("seeds.count", "must be positive");
            const std::uint64_t base = s.contains("base") ? s["base"].get<std::uint64_t>() : 1;
            for (long i = 0; i < count; ++i) cfg.seeds.push_back(base + static_cast<std::uint64_t>(i));
        } else {
            throw ConfigError("seeds", "must be an array or {count, base}");
        }
    }

    if (root.contains("output")) cfg.output = root["output"].get<std::string>();
    if (root.contains("svg")) {
        if (!root["svg"].is_boolean()) throw ConfigError("svg", "must be a boolean");
        cfg.svg = root["svg"].get<bool>();
    }

    if (root.contains("learning")) {
        const auto& l = root["learning"];
        if (!l.is_object()) throw ConfigError("learning", "must be an object");
        require_keys(l, "learning", {"grid", "grids", "prior", "base_policy", "resample_all"});
        LearningSpec spec;
        if (l.contains("grid") == l.contains("grids"))
            throw ConfigError("learning.grid", "exactly one of \"grid\" or \"grids\" is required");
        if (l.contains("grid")) {
            const auto& g = l["grid"];
            require_keys(g, "learning.grid", {"p", "rho0", "rho1"});
            if (!g.contains("p") || !g.contains("rho0"))
                throw ConfigError("learning.grid", "needs candidate lists for p and rho0");
            spec.grid_p = parse_number_list(g["p"], "learning.grid.p");
            spec.grid_rho0 = parse_number_list(g["rho0"], "learning.grid.rho0");
            if (g.contains("rho1"))
                spec.grid_rho1 = parse_number_list(g["rho1"], "learning.grid.rho1");
        } else {
            int i = 0;
            for (const auto& arm_grid : l["grids"]) {
                const std::string where = "learning.grids[" + std::to_string(i++) + "]";
                if (!arm_grid.is_array() || arm_grid.empty())
                    throw ConfigError(where, "must be a nonempty array");
                std::vector<Candidate> cands;
                for (const auto& c : arm_grid) {
                    require_keys(c, where, {"p", "rho0", "rho1"});
                    cands.push_back(Candidate{get_prob(c, where, "p"), get_prob(c, where, "rho0"),
                                              get_prob(c, where, "rho1")});
                }
                spec.grids.push_back(std::move(cands));
            }
        }
        if (l.contains("prior")) {
            const auto& pr = l["prior"];
            if (pr.is_string()) {
                if (pr.get<std::string>() != "uniform")
                    throw ConfigError("learning.prior", "string form must be \"uniform\"");
            } else if (pr.is_array()) {
                for (const auto& row : pr)
                    spec.prior.push_back(parse_number_list(row, "learning.prior"));
            } else {
                throw ConfigError("learning.prior", "must be \"uniform\" or per-arm weight lists");
            }
        }
        if (l.contains("base_policy")) {
            spec.base_policy =
                parse_policy(l["base_policy"].get<std::string>(), "learning.base_policy");
            if (spec.base_policy == PolicyKind::UniformRandom)
                throw ConfigError("learning.base_policy", "must be \"whittle\" or \"myopic\"");
        }
        if (l.contains("resample_all")) spec.resample_all = l["resample_all"].get<bool>();
        cfg.learning = std::move(spec);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

SimConfig ExperimentConfig::sim_config(PolicyKind policy) const {
    SimConfig sc;
    sc.arms = arms;
    if (initial_beliefs.empty()) throw ConfigError("initial_belief", "required for simulation");
    sc.initial_beliefs = initial_beliefs;
    if (!criterion.has_value()) throw ConfigError("criterion", "required for simulation");
    sc.criterion = *criterion;
    sc.policy = policy;
    if (!horizon.has_value()) throw ConfigError("horizon", "required for simulation");
    sc.horizon = *horizon;
    if (seeds.empty()) throw ConfigError("seeds", "required for simulation");
    sc.seeds = seeds;
    return sc;
}

LearningConfig ExperimentConfig::learning_config() const {
    if (!learning.has_value()) throw ConfigError("learning", "section required for learning runs");
    LearningConfig lc;
    lc.true_arms = arms;
    const LearningSpec& spec = *learning;
    if (!spec.grids.empty()) {
        lc.grids = spec.grids;
    } else {
        for (const auto& arm : arms) {
            std::vector<Candidate> cands;
            const std::vector<double> rho1s =
                spec.grid_rho1.empty() ? std::vector<double>{arm.rho1} : spec.grid_rho1;
            for (double p : spec.grid_p)
                for (double r0 : spec.grid_rho0)
                    for (double r1 : rho1s) cands.push_back(Candidate{p, r0, r1});
            lc.grids.push_back(std::move(cands));
        }
    }
    lc.prior = spec.prior;
    if (!criterion.has_value()) throw ConfigError("criterion", "required for learning runs");
    lc.criterion = *criterion;
    lc.base_policy = spec.base_policy;
    if (!horizon.has_value()) throw ConfigError("horizon", "required for learning runs");
    lc.horizon = *horizon;
    if (seeds.empty()) throw ConfigError("seeds", "required for learning runs");
    lc.seeds = seeds;
    lc.initial_beliefs = initial_beliefs;  // empty keeps the all-ones default
    lc.resample_all = spec.resample_all;
    try {
        lc.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("learning", e.what());
    }
    return lc;
}

std::string config_to_json(const ExperimentConfig& config) {
    json root;
    root["schema_version"] = config.schema_version;
    json arms = json::array();
    for (const auto& a : config.arms) {
        json o;
        o["kind"] = to_string(a.kind);
        o["variant"] = to_string(a.variant);
        o["p"] = a.p;
        if (a.variant == ModelVariant::DualSpeedZero) o["q"] = a.q;
        o["rho0"] = a.rho0;
        o["rho1"] = a.rho1;
        arms.push_back(o);
    }
    root["arms"] = arms;
    if (!config.initial_beliefs.empty()) root["initial_beliefs"] = config.initial_beliefs;
    if (config.criterion.has_value()) {
        if (config.criterion->average)
            root["criterion"] = "average";
        else
            root["criterion"] = json{{"beta", config.criterion->beta}};
    }
    if (config.policies.size() == 2)
        root["policy"] = "both";
    else if (config.policies.size() == 1)
        root["policy"] = to_string(config.policies[0]);
    if (config.horizon.has_value()) root["horizon"] = *config.horizon;
    if (!config.seeds.empty()) root["seeds"] = config.seeds;
    if (!config.output.empty()) root["output"] = config.output;
    if (config.svg) root["svg"] = true;
    if (config.learning.has_value()) {
        const auto& spec = *config.learning;
        json l;
        if (!spec.grids.empty()) {
            json grids = json::array();
            for (const auto& g : spec.grids) {
                json arm_grid = json::array();
                for (const auto& c : g)
                    arm_grid.push_back(json{{"p", c.p}, {"rho0", c.rho0}, {"rho1", c.rho1}});
                grids.push_back(arm_grid);
            }
            l["grids"] = grids;
        } else {
            json g;
            g["p"] = spec.grid_p;
            g["rho0"] = spec.grid_rho0;
            if (!spec.grid_rho1.empty()) g["rho1"] = spec.grid_rho1;
            l["grid"] = g;
        }
        if (!spec.prior.empty()) l["prior"] = spec.prior;
        l["base_policy"] = to_string(spec.base_policy);
        if (spec.resample_all) l["resample_all"] = true;
        root["learning"] = l;
    }
    return root.dump(2) + "\n";
}

}  // namespace whittle
