#include "monofv/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace monofv {

using nlohmann::json;

void PicardConfig::validate() const {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
}

std::string to_string(ResidualKind k) {
    return k == ResidualKind::SuccessiveIterates ? "delta" : "algebraic";
}

std::string to_string(InitPolicy p) {
    switch (p) {
    case InitPolicy::Ones: return "ones";
    case InitPolicy::LinearSchemeOutput: return "linear";
    case InitPolicy::GivenField: return "given";
    }
    return "?";
}

ResidualKind parse_residual_kind(const std::string& s) {
    if (s == "delta" || s == "successive") return ResidualKind::SuccessiveIterates;
    if (s == "algebraic") return ResidualKind::AlgebraicResidual;
    throw ConfigError("unknown residual kind '" + s + "' (expected delta|algebraic)");
}

InitPolicy parse_init_policy(const std::string& s) {
    if (s == "ones") return InitPolicy::Ones;
    if (s == "linear") return InitPolicy::LinearSchemeOutput;
    if (s == "given") return InitPolicy::GivenField;
    throw ConfigError("unknown init policy '" + s + "' (expected ones|linear|given)");
}

namespace {

const char* kSideNames[4] = {"west", "east", "south", "north"};

json side_json(const SideSpec& s) {
    json j{{"kind", s.kind}, {"data", s.data}};
    if (s.data == "constant") j["value"] = s.constant;
    return j;
}

SideSpec side_from(const json& j, SideSpec s) {
    s.kind = j.value("kind", s.kind);
    s.data = j.value("data", s.data);
    s.constant = j.value("value", s.constant);
    return s;
}

template <class T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string case_to_json(const CaseConfig& c) {
    json j;
    j["name"] = c.name;
    json g{{"domain", c.grid.domain}, {"sizes", c.grid.sizes}};
    if (c.grid.explicit_lines()) {
        g["x_lines"] = c.grid.x_lines;
        g["y_lines"] = c.grid.y_lines;
    }
    j["grid"] = g;
    j["tensor"] = {{"kind", c.tensor.kind},
                   {"value", {c.tensor.value.xx, c.tensor.value.xy, c.tensor.value.yy}},
                   {"alpha", c.tensor.alpha},
                   {"origin", c.tensor.origin},
                   {"scale", c.tensor.scale}};
    j["source"] = {{"kind", c.source.kind}, {"box", c.source.box}, {"value", c.source.value}};
    json sides;
    for (int k = 0; k < 4; ++k) sides[kSideNames[k]] = side_json(c.sides[k]);
    j["boundary"] = sides;
    j["reference"] = c.reference;
    j["picard"] = {{"epsilon", c.picard.epsilon},
                   {"residual", to_string(c.picard.residual)},
                   {"max_iter", c.picard.max_iter},
                   {"init", to_string(c.picard.init)}};
    if (c.couple) j["couple"] = *c.couple;
    if (c.transient.enabled) {
        j["transient"] = {{"dt", c.transient.dt},
                          {"t_end", c.transient.t_end},
                          {"f_init", c.transient.f_init},
                          {"weight",
                           {{"kind", c.transient.weight.kind},
                            {"a", c.transient.weight.a},
                            {"b", c.transient.weight.b}}}};
    }
    return j.dump(2);
}

CaseConfig case_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid case JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("case JSON must be an object");

    try {
        CaseConfig c;
        if (j.contains("base")) c = catalog_case(j.at("base").get<std::string>());
        read(j, "name", c.name);

        if (j.contains("grid")) {
            const json& g = j.at("grid");
            read(g, "domain", c.grid.domain);
            read(g, "sizes", c.grid.sizes);
            read(g, "x_lines", c.grid.x_lines);
            read(g, "y_lines", c.grid.y_lines);
        }
        // Flat overrides for quick custom cases.
        read(j, "sizes", c.grid.sizes);
        read(j, "alpha", c.tensor.alpha);
        if (j.contains("epsilon")) c.picard.epsilon = j.at("epsilon").get<double>();

        if (j.contains("tensor")) {
            const json& t = j.at("tensor");
            read(t, "kind", c.tensor.kind);
            if (t.contains("value")) {
                auto v = t.at("value").get<std::array<double, 3>>();
                c.tensor.value = {v[0], v[1], v[2]};
            }
            read(t, "alpha", c.tensor.alpha);
            read(t, "origin", c.tensor.origin);
            read(t, "scale", c.tensor.scale);
        }
        if (j.contains("source")) {
            const json& s = j.at("source");
            read(s, "kind", c.source.kind);
            read(s, "box", c.source.box);
            read(s, "value", c.source.value);
        }
        if (j.contains("boundary")) {
            const json& b = j.at("boundary");
            for (int k = 0; k < 4; ++k) {
                if (b.contains(kSideNames[k])) c.sides[k] = side_from(b.at(kSideNames[k]), c.sides[k]);
            }
        }
        read(j, "reference", c.reference);
        if (j.contains("picard")) {
            const json& p = j.at("picard");
            read(p, "epsilon", c.picard.epsilon);
            read(p, "max_iter", c.picard.max_iter);
            if (p.contains("residual")) c.picard.residual = parse_residual_kind(p.at("residual"));
            if (p.contains("init")) c.picard.init = parse_init_policy(p.at("init"));
        }
        if (j.contains("couple")) {
            if (j.at("couple").is_null()) {
                c.couple.reset();
            } else {
                c.couple = j.at("couple").get<std::array<double, 2>>();
            }
        }
        if (j.contains("transient")) {
            const json& t = j.at("transient");
            c.transient.enabled = true;
            read(t, "dt", c.transient.dt);
            read(t, "t_end", c.transient.t_end);
            read(t, "f_init", c.transient.f_init);
            if (t.contains("weight")) {
                const json& w = t.at("weight");
                read(w, "kind", c.transient.weight.kind);
                read(w, "a", c.transient.weight.a);
                read(w, "b", c.transient.weight.b);
            }
        }
        if (c.name.empty()) throw ConfigError("case needs a name");
        c.picard.validate();
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed case JSON: ") + e.what());
    }
}

CaseConfig load_case_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open case file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return case_from_json(ss.str());
}

CaseConfig resolve_case(const std::string& name_or_path) {
    for (const auto& c : benchmark_catalog()) {
        if (c.name == name_or_path) return c;
    }
    if (std::filesystem::exists(name_or_path)) return load_case_file(name_or_path);
    throw ProblemError("unknown case '" + name_or_path + "' (not a catalog name or a file)");
}

}  // namespace monofv
