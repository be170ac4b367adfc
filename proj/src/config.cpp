#include "stirlab/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace stirlab {

namespace {

enum class FieldType { number, integer, string, boolean, array, object };

struct FieldSpec {
    FieldType type;
    bool required = false;
};

using Schema = std::map<std::string, FieldSpec>;

bool type_matches(const json& v, FieldType t) {
    switch (t) {
        case FieldType::number: return v.is_number();
        case FieldType::integer: return v.is_number_integer();
        case FieldType::string: return v.is_string();
        case FieldType::boolean: return v.is_boolean();
        case FieldType::array: return v.is_array();
        case FieldType::object: return v.is_object();
    }
    return false;
}

void check_block(const json& cfg, const Schema& schema, const std::string& where) {
    if (!cfg.is_object()) throw SchemaError(where + ": expected an object");
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        auto spec = schema.find(it.key());
        if (spec == schema.end())
            throw SchemaError(where + ": unknown key '" + it.key() + "'");
        if (!type_matches(it.value(), spec->second.type))
            throw SchemaError(where + ": key '" + it.key() + "' has the wrong type");
    }
    for (const auto& [key, spec] : schema)
        if (spec.required && !cfg.contains(key))
            throw SchemaError(where + ": missing required key '" + key + "'");
}

const Schema flow_schema = {
    {"family", {FieldType::string, true}},
    {"A", {FieldType::number}},
    {"nu", {FieldType::integer}},
    {"sign", {FieldType::integer}},
    {"d", {FieldType::integer}},
};

const Schema bump_schema = {
    {"mass", {FieldType::number, true}},
    {"width", {FieldType::number, true}},
    {"center", {FieldType::array}},
};

const Schema mc_schema = {
    {"M", {FieldType::integer, true}},
    {"T", {FieldType::number, true}},
    {"dt", {FieldType::number}},
};

const Schema reaction_schema = {
    {"alpha0", {FieldType::number, true}},
    {"rate", {FieldType::number}},
};

void validate_experiment(const json& cfg) {
    const std::string kind = cfg.at("experiment").get<std::string>();
    static const Schema common = {
        {"experiment", {FieldType::string, true}},
        {"seed", {FieldType::integer}},
        {"out", {FieldType::string}},
        {"threads", {FieldType::integer}},
    };

    auto merged = [&](Schema extra) {
        extra.insert(common.begin(), common.end());
        return extra;
    };

    if (kind == "tau-vs-nu") {
        check_block(cfg, merged({
            {"nu_list", {FieldType::array, true}},
            {"n", {FieldType::integer, true}},
            {"tol", {FieldType::number}},
            {"norm_tol", {FieldType::number}},
            {"cfl", {FieldType::number}},
            {"with_diffusivity", {FieldType::boolean}},
        }), "tau-vs-nu");
    } else if (kind == "D-vs-A") {
        check_block(cfg, merged({
            {"A_list", {FieldType::array, true}},
            {"n_list", {FieldType::array}},
            {"n", {FieldType::integer}},
            {"method", {FieldType::string}},
            {"tol", {FieldType::number}},
            {"mc", {FieldType::object}},
        }), "D-vs-A");
        if (cfg.contains("mc")) check_block(cfg["mc"], mc_schema, "D-vs-A.mc");
        if (!cfg.contains("n") && !cfg.contains("n_list"))
            throw SchemaError("D-vs-A: needs 'n' or 'n_list'");
    } else if (kind == "ks-suppression") {
        check_block(cfg, merged({
            {"chi", {FieldType::number, true}},
            {"n", {FieldType::integer, true}},
            {"n_refine", {FieldType::integer}},
            {"T", {FieldType::number, true}},
            {"bump", {FieldType::object, true}},
            {"mass_sweep", {FieldType::array}},
            {"flow", {FieldType::object, true}},
            {"peak_factor", {FieldType::number}},
            {"tail_threshold", {FieldType::number}},
            {"suppress_factor", {FieldType::number}},
            {"sample_dt", {FieldType::number}},
            {"cfl", {FieldType::number}},
            {"snapshot_times", {FieldType::array}},
        }), "ks-suppression");
        check_block(cfg["bump"], bump_schema, "ks-suppression.bump");
        check_block(cfg["flow"], flow_schema, "ks-suppression.flow");
    } else if (kind == "rd-quench") {
        check_block(cfg, merged({
            {"reaction", {FieldType::object, true}},
            {"n", {FieldType::integer, true}},
            {"T", {FieldType::number, true}},
            {"bump", {FieldType::object, true}},
            {"flow", {FieldType::object, true}},
            {"burn_tol", {FieldType::number}},
            {"range_tol", {FieldType::number}},
            {"sample_dt", {FieldType::number}},
            {"cfl", {FieldType::number}},
            {"post_horizon", {FieldType::number}},
        }), "rd-quench");
        check_block(cfg["reaction"], reaction_schema, "rd-quench.reaction");
        check_block(cfg["bump"], bump_schema, "rd-quench.bump");
        check_block(cfg["flow"], flow_schema, "rd-quench.flow");
    } else if (kind == "occupancy") {
        check_block(cfg, merged({
            {"flow", {FieldType::object, true}},
            {"mu", {FieldType::integer, true}},
            {"tau_list", {FieldType::array, true}},
            {"M", {FieldType::integer, true}},
            {"dt", {FieldType::number}},
        }), "occupancy");
        check_block(cfg["flow"], flow_schema, "occupancy.flow");
    } else if (kind == "custom") {
        check_block(cfg, merged({
            {"model", {FieldType::string, true}},
            {"flow", {FieldType::object, true}},
            {"n", {FieldType::integer, true}},
            {"T", {FieldType::number, true}},
            {"chi", {FieldType::number}},
            {"reaction", {FieldType::object}},
            {"bump", {FieldType::object}},
            {"init_seed", {FieldType::integer}},
            {"sample_dt", {FieldType::number}},
            {"cfl", {FieldType::number}},
            {"dt", {FieldType::number}},
            {"snapshot_times", {FieldType::array}},
        }), "custom");
        check_block(cfg["flow"], flow_schema, "custom.flow");
        if (cfg.contains("reaction")) check_block(cfg["reaction"], reaction_schema, "custom.reaction");
        if (cfg.contains("bump")) check_block(cfg["bump"], bump_schema, "custom.bump");
        const std::string model = cfg.at("model").get<std::string>();
        if (model != "ad" && model != "ks" && model != "rd")
            throw SchemaError("custom: model must be one of ad|ks|rd");
    } else if (kind == "sweep") {
        check_block(cfg, merged({
            {"base", {FieldType::object, true}},
            {"sweep", {FieldType::object, true}},
        }), "sweep");
        validate_config(cfg.at("base"));
        for (auto it = cfg.at("sweep").begin(); it != cfg.at("sweep").end(); ++it)
            if (!it.value().is_array())
                throw SchemaError("sweep: values for '" + it.key() + "' must be an array");
    } else {
        throw SchemaError("unknown experiment '" + kind + "'");
    }
}

}  // namespace

VelocityField flow_from_json(const json& spec) {
    check_block(spec, flow_schema, "flow");
    const std::string family = spec.at("family").get<std::string>();
    const double A = spec.value("A", 1.0);
    const int nu = spec.value("nu", 1);
    const int sign = spec.value("sign", 1);
    VelocityField base;
    if (family == "cellular2d") base = cellular2d(A);
    else if (family == "cellular3d") base = cellular3d(A);
    else if (family == "shear2d") base = shear2d(A);
    else if (family == "zero") base = zero_flow(spec.value("d", 2));
    else throw SchemaError("flow: unknown family '" + family + "'");
    return rescale(base, nu, sign);
}

json flow_spec_to_json(const std::string& spec) {
    json out;
    auto colon = spec.find(':');
    out["family"] = spec.substr(0, colon);
    if (colon == std::string::npos) return out;
    std::stringstream rest(spec.substr(colon + 1));
    std::string kv;
    while (std::getline(rest, kv, ',')) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw SchemaError("flow spec: expected key=value in '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        if (key == "A") out["A"] = std::stod(val);
        else if (key == "nu") out["nu"] = std::stoi(val);
        else if (key == "sign") out["sign"] = std::stoi(val);
        else if (key == "d") out["d"] = std::stoi(val);
        else throw SchemaError("flow spec: unknown key '" + key + "'");
    }
    return out;
}

VelocityField flow_from_string(const std::string& spec) {
    return flow_from_json(flow_spec_to_json(spec));
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open config file " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("config parse error: ") + e.what());
    }
    return cfg;
}

void validate_config(const json& cfg) {
    if (!cfg.is_object() || !cfg.contains("experiment"))
        throw SchemaError("config: missing 'experiment'");
    validate_experiment(cfg);
}

std::uint64_t config_hash(const json& cfg) {
    const std::string dump = cfg.dump();  // object keys are sorted
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string version_string() { return "stirlab 0.1.0"; }

}  // namespace stirlab
