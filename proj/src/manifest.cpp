#include "fsasl/manifest.hpp"

#include <fstream>
#include <json.hpp>

#include "fsasl/errors.hpp"

namespace fsasl {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json config_to_json(const FsaslConfig& c) {
    ordered_json j;
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["gamma"] = c.gamma;
    j["gamma_is_fraction"] = c.gamma_is_fraction;
    j["k"] = c.k;
    j["c"] = static_cast<long>(c.c);
    j["max_outer_iters"] = c.max_outer_iters;
    j["obj_tol"] = c.obj_tol;
    j["variant"] = to_string(c.structure);
    j["adaptive"] = c.adaptive;
    j["w_path"] = to_string(c.w_path);
    j["mu_policy"] = to_string(c.mu_policy);
    return j;
}

FsaslConfig config_from_json(const ordered_json& j) {
    FsaslConfig c;
    c.alpha = j.value("alpha", c.alpha);
    c.beta = j.value("beta", c.beta);
    c.gamma = j.value("gamma", c.gamma);
    c.gamma_is_fraction = j.value("gamma_is_fraction", c.gamma_is_fraction);
    c.k = j.value("k", c.k);
    c.c = j.value("c", static_cast<long>(c.c));
    c.max_outer_iters = j.value("max_outer_iters", c.max_outer_iters);
    c.obj_tol = j.value("obj_tol", c.obj_tol);
    if (j.contains("variant")) {
        bool adaptive = true;
        c.structure = parse_variant(j["variant"].get<std::string>(), &adaptive);
        c.adaptive = adaptive;
    }
    if (j.contains("adaptive")) c.adaptive = j["adaptive"].get<bool>();
    if (j.contains("w_path")) c.w_path = parse_w_path(j["w_path"].get<std::string>());
    if (j.contains("mu_policy")) c.mu_policy = parse_mu_policy(j["mu_policy"].get<std::string>());
    return c;
}

}  // namespace

std::string manifest_to_json(const RunManifest& m) {
    ordered_json j;
    j["dataset"] = {{"path", m.dataset.path},
                    {"format", to_string(m.dataset.format)},
                    {"orientation", to_string(m.dataset.orientation)},
                    {"has_header", m.dataset.has_header},
                    {"label_column", m.dataset.label_column}};
    j["preprocessing"] = to_string(m.preprocessing);
    j["config"] = config_to_json(m.config);
    ordered_json grid;
    grid["alphas"] = m.grid.alphas;
    grid["betas"] = m.grid.betas;
    grid["gamma_fractions"] = m.grid.gamma_fractions;
    grid["ks"] = m.grid.ks;
    j["grid"] = grid;
    j["m_grid"] = m.m_grid;
    j["seeds"] = m.seeds;
    j["output_dir"] = m.output_dir;
    return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("manifest parse error: ") + e.what());
    }
    RunManifest m;
    try {
        if (j.contains("dataset")) {
            const auto& d = j["dataset"];
            m.dataset.path = d.value("path", std::string());
            if (d.contains("format")) m.dataset.format = parse_format(d["format"].get<std::string>());
            if (d.contains("orientation")) {
                m.dataset.orientation = parse_orientation(d["orientation"].get<std::string>());
            }
            m.dataset.has_header = d.value("has_header", false);
            m.dataset.label_column = d.value("label_column", std::string());
        }
        if (j.contains("preprocessing")) {
            m.preprocessing = parse_preprocessing(j["preprocessing"].get<std::string>());
        }
        if (j.contains("config")) m.config = config_from_json(j["config"]);
        if (j.contains("grid")) {
            const auto& g = j["grid"];
            m.grid.alphas = g.value("alphas", std::vector<double>());
            m.grid.betas = g.value("betas", std::vector<double>());
            m.grid.gamma_fractions = g.value("gamma_fractions", std::vector<double>());
            m.grid.ks = g.value("ks", std::vector<int>());
        }
        m.m_grid = j.value("m_grid", std::vector<int>());
        m.seeds = j.value("seeds", std::vector<unsigned>());
        m.output_dir = j.value("output_dir", std::string("out"));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("manifest field error: ") + e.what());
    }
    return m;
}

void save_manifest(const RunManifest& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write manifest: " + path);
    out << manifest_to_json(m);
}

RunManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return manifest_from_json(text);
}

}  // namespace fsasl
