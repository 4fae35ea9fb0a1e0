#include "alq/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "alq/aliquot.hpp"
#include "alq/alpha.hpp"
#include "alq/beta.hpp"
#include "alq/errors.hpp"
#include "alq/lambda.hpp"
#include "alq/means.hpp"
#include "alq/selftest.hpp"

namespace alq::cli {

namespace {

using nlohmann::json;

enum class Kind { count, real, text, count_list, real_list };

struct Setting {
    std::string key;
    Kind kind;
    json fallback;
    std::string help;
};

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

double parse_real(const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ParameterError("not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw ParameterError("not a number: '" + s + "'");
    return v;
}

// Normalizes a value from the command line (string) or a config file (any
// JSON scalar or array) to the setting's type.
json normalize(const Setting& st, const json& v) {
    if (v.is_null()) return v;
    auto scalar_text = [&](const json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
    switch (st.kind) {
        case Kind::count: return parse_count(scalar_text(v));
        case Kind::real: return parse_real(scalar_text(v));
        case Kind::text: return scalar_text(v);
        case Kind::count_list:
        case Kind::real_list: {
            std::vector<std::string> items;
            if (v.is_array()) {
                for (const auto& x : v) items.push_back(scalar_text(x));
            } else {
                items = split_commas(scalar_text(v));
            }
            json arr = json::array();
            for (const auto& s : items) arr.push_back(st.kind == Kind::count_list ? json(parse_count(s)) : json(parse_real(s)));
            return arr;
        }
    }
    return v;
}

std::vector<Setting> alpha_settings() {
    return {{"N", Kind::count, 1'000'000, "odd primes p <= N are summed explicitly"},
            {"L", Kind::count, 15, "series depth for p = 2"},
            {"M", Kind::count, 15, "series depth for odd primes"}};
}

json default_e() {
    json a = json::array();
    for (double e : beta::default_exponents()) a.push_back(e);
    return a;
}

std::vector<Setting> beta_settings(const std::string& n_key) {
    return {{"J", Kind::count, 8, "number of j terms"},
            {n_key, Kind::count, 10'000'000, "N_j for every j (even)"},
            {"Nj", Kind::count_list, nullptr, "per-j N_j, comma separated (overrides the common N)"},
            {"e", Kind::real_list, default_e(), "per-j exponents e_j, comma separated"},
            {"K2", Kind::count, 64, "2-adic truncation depth"},
            {"slack", Kind::real, 1e-9, "relative widening of the S/T membership tests"},
            {"checkpoint-dir", Kind::text, "", "directory for block checkpoints (empty: none)"},
            {"max-new-blocks", Kind::count, nullptr, "stop after computing this many new blocks"}};
}

std::vector<Setting> common_settings(long long block_size) {
    return {{"workers", Kind::count, 1, "worker threads"},
            {"block-size", Kind::count, block_size, "integers per reduction block"}};
}

struct Verb {
    std::string name;
    std::string description;
    std::vector<Setting> settings;
    bool tabular = false;
};

std::vector<Verb> verbs() {
    std::vector<Verb> v;
    {
        auto s = alpha_settings();
        for (auto& c : common_settings(10'000'000)) s.push_back(c);
        v.push_back({"alpha", "certified upper bound for alpha", s, false});
    }
    {
        auto s = beta_settings("N");
        for (auto& c : common_settings(10'000'000)) s.push_back(c);
        v.push_back({"beta", "certified lower bound for beta", s, true});
    }
    {
        std::vector<Setting> s{{"alpha-N", Kind::count, 1'000'000, "alpha prime cutoff"},
                               {"L", Kind::count, 15, "series depth for p = 2"},
                               {"M", Kind::count, 15, "series depth for odd primes"}};
        for (auto& c : beta_settings("beta-N")) s.push_back(c);
        for (auto& c : common_settings(10'000'000)) s.push_back(c);
        v.push_back({"lambda", "certified upper bound for lambda = alpha - beta and mu = exp(lambda)", s, false});
    }
    {
        std::vector<Setting> s{{"class", Kind::text, "even", "residue class: all, even or odd"},
                               {"N", Kind::count_list, json::array({10'000}), "cutoffs, comma separated"}};
        for (auto& c : common_settings(1'000'000)) s.push_back(c);
        v.push_back({"means", "arithmetic and logarithmic means of s(n)/n", s, true});
    }
    v.push_back({"trace", "aliquot sequence trajectory",
                 {{"start", Kind::text, nullptr, "starting value (decimal)"},
                  {"max-steps", Kind::count, 100, "maximum number of s applications"},
                  {"effort", Kind::count, 1'000'000, "Pollard-rho budget per factorization"}},
                 false});
    v.push_back({"selftest", "run the oracle suites", {}, false});
    return v;
}

std::vector<beta::BetaJConfig> beta_configs(const json& cfg, const std::string& n_key) {
    const auto J = cfg.at("J").get<unsigned long long>();
    const auto& es = cfg.at("e");
    if (J < 1) throw ParameterError("J must be >= 1");
    if (es.size() < J) throw ParameterError("need at least J exponents e_j");
    const auto& nj = cfg.at("Nj");
    if (!nj.is_null() && nj.size() != J) throw ParameterError("Nj must list exactly J values");
    std::vector<beta::BetaJConfig> out;
    for (unsigned j = 1; j <= J; ++j) {
        beta::BetaJConfig c;
        c.j = j;
        c.N = nj.is_null() ? cfg.at(n_key).get<unsigned long long>() : nj[j - 1].get<unsigned long long>();
        c.e = es[j - 1].get<double>();
        c.K2 = static_cast<unsigned>(cfg.at("K2").get<unsigned long long>());
        c.validate();
        out.push_back(c);
    }
    return out;
}

beta::BetaOptions beta_options(const json& cfg) {
    beta::BetaOptions opt;
    opt.workers = cfg.at("workers").get<unsigned>();
    opt.block_size = cfg.at("block-size").get<long long>();
    if (opt.block_size <= 0) throw ParameterError("block-size must be positive");
    opt.sets.slack = cfg.at("slack").get<double>();
    if (!(opt.sets.slack >= 0 && opt.sets.slack < 1e-3)) throw ParameterError("slack must lie in [0, 1e-3)");
    if (const auto dir = cfg.at("checkpoint-dir").get<std::string>(); !dir.empty()) opt.checkpoint_dir = dir;
    if (!cfg.at("max-new-blocks").is_null()) opt.max_new_blocks = cfg.at("max-new-blocks").get<long long>();
    return opt;
}

unsigned as_unsigned(const json& v, const char* what) {
    const auto x = v.get<unsigned long long>();
    if (x > 1'000'000) throw ParameterError(std::string(what) + " is unreasonably large");
    return static_cast<unsigned>(x);
}

struct Output {
    json report;
    std::vector<std::string> csv;  // empty for non-tabular verbs
};

Output execute(const std::string& verb, const json& cfg) {
    Output out;
    if (verb == "alpha" || verb == "lambda") {
        alpha::AlphaParams p;
        p.N = cfg.at(verb == "alpha" ? "N" : "alpha-N").get<unsigned long long>();
        p.L = as_unsigned(cfg.at("L"), "L");
        p.M = as_unsigned(cfg.at("M"), "M");
        alpha::AlphaOptions opt;
        opt.workers = cfg.at("workers").get<unsigned>();
        opt.block_size = cfg.at("block-size").get<unsigned long long>();
        if (verb == "alpha") {
            out.report = alpha::to_json(alpha::alpha_upper_bound(p, opt));
            return out;
        }
        const auto configs = beta_configs(cfg, "beta-N");
        const auto a = alpha::alpha_upper_bound(p, opt);
        const auto b = beta::beta_lower(configs, beta_options(cfg));
        out.report = to_json(combine_lambda(a, b));
        return out;
    }
    if (verb == "beta") {
        const auto configs = beta_configs(cfg, "N");
        const auto b = beta::beta_lower(configs, beta_options(cfg));
        out.report = beta::to_json(b);
        out.csv.push_back(beta::csv_header());
        for (const auto& r : b.per_j) out.csv.push_back(beta::csv_row(r));
        return out;
    }
    if (verb == "means") {
        const auto c = means::residue_from_string(cfg.at("class").get<std::string>());
        means::MeanOptions opt;
        opt.workers = cfg.at("workers").get<unsigned>();
        opt.block_size = cfg.at("block-size").get<long long>();
        if (opt.block_size <= 0) throw ParameterError("block-size must be positive");
        json rows = json::array();
        out.csv.push_back(means::csv_header());
        for (const auto& n : cfg.at("N")) {
            const auto r = means::mean_report(c, n.get<long long>(), opt);
            rows.push_back(means::to_json(r));
            out.csv.push_back(means::csv_row(r));
        }
        out.report = {{"rows", rows}};
        return out;
    }
    if (verb == "trace") {
        if (cfg.at("start").is_null()) throw ParameterError("trace: missing starting value");
        aliquot::BigInt start;
        if (start.set_str(cfg.at("start").get<std::string>(), 10) != 0)
            throw ParameterError("trace: starting value must be a decimal integer");
        const auto rec = aliquot::trace(start, cfg.at("max-steps").get<unsigned long long>(),
                                        {cfg.at("effort").get<unsigned long long>()});
        out.report = aliquot::to_json(rec);
        return out;
    }
    if (verb == "selftest") {
        json checks = json::array();
        bool all = true;
        for (const auto& c : selftest::run_all()) {
            checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
            all = all && c.passed;
        }
        out.report = {{"checks", checks}, {"passed", all}};
        return out;
    }
    throw ParameterError("unknown verb " + verb);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    f << content;
    if (!f) throw ResourceError("cannot write " + path);
}

std::string csv_path(const std::string& json_path) {
    const auto dot = json_path.find_last_of('.');
    const auto slash = json_path.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return json_path.substr(0, dot) + ".csv";
    return json_path + ".csv";
}

}  // namespace

unsigned long long parse_count(const std::string& text) {
    if (text.empty()) throw ParameterError("empty count");
    if (text.find_first_of(".eE") == std::string::npos) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            if (text[0] == '-') throw std::invalid_argument("negative");
            v = std::stoull(text, &used);
        } catch (const std::exception&) {
            throw ParameterError("not a non-negative integer: '" + text + "'");
        }
        if (used != text.size()) throw ParameterError("not a non-negative integer: '" + text + "'");
        return v;
    }
    std::size_t used = 0;
    long double v = 0;
    try {
        v = std::stold(text, &used);
    } catch (const std::exception&) {
        throw ParameterError("not a number: '" + text + "'");
    }
    if (used != text.size() || !(v >= 0) || v > 1.8e19L || v != std::floor(v))
        throw ParameterError("not a non-negative integer: '" + text + "'");
    return static_cast<unsigned long long>(v);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"alq: certified bounds for the aliquot constant", "alq"};
    app.require_subcommand(1);
    std::string config_path, out_path;

    const auto all = verbs();
    std::map<std::string, std::map<std::string, std::string>> raw;
    std::map<std::string, std::map<std::string, CLI::Option*>> given;
    for (const auto& v : all) {
        auto* sub = app.add_subcommand(v.name, v.description);
        sub->add_option("--config", config_path, "JSON configuration (or a previous report); flags override it");
        sub->add_option("--out", out_path, "write the JSON report here (tabular verbs also write a .csv)");
        for (const auto& s : v.settings) {
            auto& slot = raw[v.name][s.key];
            const std::string help = s.help + " [default " + s.fallback.dump() + "]";
            if (v.name == "trace" && s.key == "start") {
                given[v.name][s.key] = sub->add_option("start", slot, help);
            } else {
                given[v.name][s.key] = sub->add_option("--" + s.key, slot, help);
            }
        }
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return parameter_error;
    }

    const auto chosen = app.get_subcommands().front()->get_name();
    const Verb& verb = *std::find_if(all.begin(), all.end(), [&](const Verb& v) { return v.name == chosen; });

    try {
        json file_cfg = json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ParameterError("cannot read config file " + config_path);
            try {
                file_cfg = json::parse(in);
            } catch (const json::exception& e) {
                throw ParameterError("config file " + config_path + ": " + e.what());
            }
            if (file_cfg.contains("config")) file_cfg = file_cfg["config"];
        }
        json cfg = json::object();
        for (const auto& s : verb.settings) {
            json value = s.fallback;
            if (file_cfg.contains(s.key)) value = file_cfg[s.key];
            if (given[verb.name][s.key]->count() > 0) value = raw[verb.name][s.key];
            cfg[s.key] = normalize(s, value);
        }
        for (const auto& [k, v] : file_cfg.items()) {
            if (std::none_of(verb.settings.begin(), verb.settings.end(), [&](const Setting& s) { return s.key == k; }))
                throw ParameterError("config file: unknown key '" + k + "' for verb " + verb.name);
        }

        const auto t0 = std::chrono::steady_clock::now();
        const auto result = execute(verb.name, cfg);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        json report{{"schema_version", kSchemaVersion},
                    {"verb", verb.name},
                    {"config", cfg},
                    {"result", result.report},
                    {"timing", {{"seconds", seconds}}}};
        const std::string text = report.dump(2) + "\n";
        out << text;
        if (!out_path.empty()) {
            write_file(out_path, text);
            if (verb.tabular) {
                std::string csv;
                for (const auto& line : result.csv) csv += line + "\n";
                write_file(csv_path(out_path), csv);
            }
        }
        if (verb.name == "selftest" && !result.report.at("passed").get<bool>()) return resource_error;
        if (verb.name == "trace" && result.report.at("classification").at("kind") == "effort_exhausted") {
            err << "trace: factorization effort exhausted\n";
            return resource_error;
        }
        return ok;
    } catch (const ParameterError& e) {
        err << "parameter error: " << e.what() << '\n';
        return parameter_error;
    } catch (const json::exception& e) {
        err << "parameter error: " << e.what() << '\n';
        return parameter_error;
    } catch (const ResourceError& e) {
        err << "resource error: " << e.what() << '\n';
        return resource_error;
    } catch (const beta::Interrupted& e) {
        err << "interrupted: " << e.what() << '\n';
        return resource_error;
    } catch (const OverflowError& e) {
        err << "overflow: " << e.what() << '\n';
        return resource_error;
    }
}

}  // namespace alq::cli
