#include "qhj/cli.hpp"

#include "qhj/errors.hpp"
#include "qhj/quantization.hpp"
#include "qhj/wavefunction.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

namespace qhj::cli {

namespace {

const std::set<std::string> kCommands = {"list", "solve", "verify", "wavefunction", "assignments"};
const std::set<std::string> kSwitches = {"--json", "--csv", "--help", "-h"};
const std::set<std::string> kValued = {"--out", "--config", "--levels", "--tol", "--points", "--state", "--samples"};

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorKind::schema, what); }

Json complex_json(cplx v) {
    Json j;
    j["re"] = v.real();
    j["im"] = v.imag();
    return j;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
    return s;
}

void dump_to(const Json& j, std::string& s) {
    switch (j.type()) {
        case Json::value_t::object: {
            s += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) s += ',';
                first = false;
                s += Json(it.key()).dump();
                s += ':';
                dump_to(it.value(), s);
            }
            s += '}';
            break;
        }
        case Json::value_t::array: {
            s += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) s += ',';
                dump_to(j[i], s);
            }
            s += ']';
            break;
        }
        case Json::value_t::number_float: {
            double v = j.get<double>();
            if (!std::isfinite(v)) {
                s += "null";
            } else {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
                s += buf;
            }
            break;
        }
        default: s += j.dump();
    }
}

// Model parameters are every --name value pair that is not a command option.
struct SplitArgs {
    std::vector<std::string> options;
    std::vector<std::string> positional;
    std::map<std::string, std::string> params;
};

SplitArgs split_args(const std::vector<std::string>& args) {
    SplitArgs s;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0 && a != "-h") {
            s.positional.push_back(a);
            continue;
        }
        std::string name = a, value;
        bool inline_value = false;
        if (auto eq = a.find('='); eq != std::string::npos) {
            name = a.substr(0, eq);
            value = a.substr(eq + 1);
            inline_value = true;
        }
        if (kSwitches.count(name)) {
            if (inline_value) schema_error("option " + name + " takes no value");
            s.options.push_back(name);
            continue;
        }
        if (!inline_value) {
            if (i + 1 >= args.size()) schema_error("option " + name + " needs a value");
            value = args[++i];
        }
        if (kValued.count(name)) {
            s.options.push_back(name);
            s.options.push_back(value);
        } else {
            const std::string key = name.substr(2);
            if (key.empty()) schema_error("empty option name");
            if (s.params.count(key)) schema_error("parameter '" + key + "' given twice");
            s.params[key] = value;
        }
    }
    return s;
}

void apply_config_file(const std::string& path, RunConfig& c) {
    std::ifstream in(path);
    if (!in) schema_error("cannot read config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        schema_error("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) schema_error("config file must hold a JSON object");
    static const std::set<std::string> keys = {"model", "params", "levels", "tol", "points",
                                               "format",  "out",   "state",  "samples"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!keys.count(it.key())) schema_error("config file: unknown key '" + it.key() + "'");
    auto get_int = [&](const char* key, auto& dst) {
        if (!j.contains(key)) return;
        if (!j[key].is_number_integer()) schema_error(std::string("config file: '") + key + "' must be an integer");
        dst = j[key].get<std::decay_t<decltype(dst)>>();
    };
    if (j.contains("model")) {
        if (!j["model"].is_string()) schema_error("config file: 'model' must be a string");
        c.model = j["model"].get<std::string>();
    }
    if (j.contains("params")) {
        if (!j["params"].is_object()) schema_error("config file: 'params' must be an object");
        for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
            if (it.value().is_number())
                c.params[it.key()] = it.value().dump();
            else if (it.value().is_string())
                c.params[it.key()] = it.value().get<std::string>();
            else
                schema_error("config file: parameter '" + it.key() + "' must be a number or string");
        }
    }
    get_int("levels", c.levels);
    get_int("points", c.points);
    get_int("state", c.state);
    get_int("samples", c.samples);
    if (j.contains("tol")) {
        if (!j["tol"].is_number()) schema_error("config file: 'tol' must be a number");
        c.tol = j["tol"].get<double>();
    }
    if (j.contains("out")) {
        if (!j["out"].is_string()) schema_error("config file: 'out' must be a string");
        c.out = j["out"].get<std::string>();
    }
    if (j.contains("format")) {
        const std::string f = j["format"].is_string() ? j["format"].get<std::string>() : "";
        if (f == "text") c.format = Format::text;
        else if (f == "json") c.format = Format::json;
        else if (f == "csv") c.format = Format::csv;
        else schema_error("config file: 'format' must be text, json or csv");
    }
}

std::string usage() {
    return "usage: qhj <command> [model] [--param value ...] [options]\n"
           "commands:\n"
           "  list [model]          catalog entries and parameter schemas\n"
           "  solve <model>         band-edge / level spectrum with wavefunction forms\n"
           "  assignments <model>   every residue assignment with its admissibility verdict\n"
           "  verify <model>        compare the analytic spectrum with the finite-difference oracle\n"
           "  wavefunction <model>  sample one state as CSV columns x, re, im\n"
           "options:\n"
           "  --json | --csv        output format (default text; wavefunction defaults to CSV)\n"
           "  --out <path>          write output to a file\n"
           "  --config <path>       JSON config with the same keys; flags win on conflict\n"
           "  --levels <n>          levels per branch for energy-dependent residues (default 4)\n"
           "  --tol <x>             oracle energy tolerance (default per model)\n"
           "  --points <n>          oracle coarse grid points (default per model)\n"
           "  --state <i>           state index in the sorted spectrum (wavefunction)\n"
           "  --samples <n>         number of sample points (wavefunction, default 200)\n"
           "exit codes: 0 ok, 1 invalid input, 2 no admissible assignment, 3 verification failed\n";
}

std::string formula_for(const QuantizationOutcome& o, int set_label) {
    if (auto it = o.qes_relations.find(set_label); it != o.qes_relations.end()) return it->second;
    // Band-edge energies have no closed form in general: they are the roots of the coefficient pencil.
    return o.energy_formula.value_or("det(M0 + E M1) = 0");
}

void print_list(const Json& doc, std::ostream& out) {
    for (const auto& e : doc) {
        out << std::left << std::setw(16) << e["id"].get<std::string>() << std::setw(6)
            << e["spectrum_class"].get<std::string>() << e["variable_map"].get<std::string>() << "\n";
        for (const auto& p : e["params"])
            out << "    --" << std::setw(8) << p["name"].get<std::string>() << p["doc"].get<std::string>() << "\n";
    }
}

void print_solve(const Json& doc, Format f, std::ostream& out) {
    if (f == Format::csv) {
        out << "set_label,n,energy_re,energy_im,energy_exact,degeneracy,residues,formula_string,wavefunction_form\n";
        for (const auto& s : doc["solutions"]) {
            std::vector<std::string> res;
            for (const auto& r : s["residues"]) res.push_back(r.get<std::string>());
            out << s["set_label"].get<int>() << ',' << s["n"].get<long long>() << ','
                << format_double(s["energy"]["re"].get<double>()) << ',' << format_double(s["energy"]["im"].get<double>())
                << ',' << csv_field(s["energy_exact"].is_null() ? "" : s["energy_exact"].get<std::string>()) << ','
                << s["degeneracy"].get<int>() << ',' << csv_field(join(res, ";")) << ','
                << csv_field(s["formula_string"].get<std::string>()) << ','
                << csv_field(s["wavefunction_form"].get<std::string>()) << "\n";
        }
        return;
    }
    out << doc["model"].get<std::string>() << " (" << doc["outcome"].get<std::string>() << ")\n";
    if (!doc["energy_formula"].is_null()) out << "  " << doc["energy_formula"].get<std::string>() << "\n";
    for (auto it = doc["qes_relations"].begin(); it != doc["qes_relations"].end(); ++it)
        out << "  set " << it.key() << ": " << it.value().get<std::string>() << "\n";
    for (const auto& s : doc["solutions"]) {
        std::vector<std::string> res;
        for (const auto& r : s["residues"]) res.push_back(r.get<std::string>());
        cplx E(s["energy"]["re"].get<double>(), s["energy"]["im"].get<double>());
        out << "  set " << s["set_label"].get<int>() << "  n=" << s["n"].get<long long>() << "  E=" << format_complex(E);
        if (!s["energy_exact"].is_null()) out << " (" << s["energy_exact"].get<std::string>() << ")";
        if (s["degeneracy"].get<int>() > 1) out << "  degeneracy=" << s["degeneracy"].get<int>();
        out << "  residues [" << join(res, ", ") << "]\n    psi = " << s["wavefunction_form"].get<std::string>()
            << "\n";
    }
}

void print_assignments(const Json& doc, Format f, std::ostream& out) {
    if (f == Format::csv) out << "set_label,pole_branch,lambda_branch,residues,a0,lambda1,n_value,energy,admissible,verdict\n";
    for (const auto& a : doc["assignments"]) {
        std::vector<std::string> res, br;
        for (const auto& r : a["residues"]) res.push_back(r.get<std::string>());
        for (const auto& b : a["pole_branch"]) br.push_back(std::to_string(b.get<int>()));
        const std::string energy = a["energy"].is_null() ? "" : a["energy"].get<std::string>();
        if (f == Format::csv) {
            out << a["set_label"].get<int>() << ',' << csv_field(join(br, ";")) << ',' << a["lambda_branch"].get<int>()
                << ',' << csv_field(join(res, ";")) << ',' << csv_field(a["a0"].get<std::string>()) << ','
                << csv_field(a["lambda1"].get<std::string>()) << ',' << csv_field(a["n_value"].get<std::string>()) << ','
                << csv_field(energy) << ',' << (a["admissible"].get<bool>() ? "true" : "false") << ','
                << csv_field(a["verdict"].get<std::string>()) << "\n";
        } else {
            out << "set " << a["set_label"].get<int>() << "  branches [" << join(br, ",") << "|"
                << a["lambda_branch"].get<int>() << "]  residues [" << join(res, ", ") << "]  a0=" << a["a0"].get<std::string>()
                << "  lambda1=" << a["lambda1"].get<std::string>() << "  n=" << a["n_value"].get<std::string>();
            if (!energy.empty()) out << "  E=" << energy;
            out << "  " << (a["admissible"].get<bool>() ? "admissible" : "rejected: " + a["verdict"].get<std::string>())
                << "\n";
        }
    }
}

void print_verify(const Json& doc, Format f, std::ostream& out) {
    if (f == Format::csv) {
        out << "set_label,n,analytic_re,analytic_im,oracle_re,oracle_im,delta,error_estimate,bc,overlap,"
               "modulus_difference,analytic_nodes,oracle_nodes,pass,note\n";
        for (const auto& r : doc["rows"]) {
            auto opt = [&](const char* k) { return r.contains(k) ? r[k].dump() : std::string(); };
            auto num = [&](const char* k) { return r.contains(k) ? format_double(r[k].get<double>()) : std::string(); };
            out << r["set_label"].get<int>() << ',' << r["n"].get<long long>() << ','
                << format_double(r["analytic"]["re"].get<double>()) << ',' << format_double(r["analytic"]["im"].get<double>())
                << ',' << format_double(r["oracle"]["re"].get<double>()) << ','
                << format_double(r["oracle"]["im"].get<double>()) << ',' << format_double(r["delta"].get<double>()) << ','
                << format_double(r["error_estimate"].get<double>()) << ',' << r["bc"].get<std::string>() << ','
                << num("overlap") << ',' << num("modulus_difference") << ',' << opt("analytic_nodes") << ','
                << opt("oracle_nodes") << ',' << (r["pass"].get<bool>() ? "PASS" : "FAIL") << ','
                << csv_field(r["note"].get<std::string>()) << "\n";
        }
        return;
    }
    const Json& o = doc["oracle"];
    out << doc["model"].get<std::string>() << ": " << o["kind"].get<std::string>() << " oracle on ["
        << format_double(o["lo"].get<double>()) << ", " << format_double(o["hi"].get<double>()) << "], "
        << o["points"].get<int>() << " points, tol " << o["tol"].get<double>() << "\n";
    for (const auto& r : doc["rows"]) {
        cplx a(r["analytic"]["re"].get<double>(), r["analytic"]["im"].get<double>());
        cplx b(r["oracle"]["re"].get<double>(), r["oracle"]["im"].get<double>());
        out << "  set " << r["set_label"].get<int>() << " n=" << r["n"].get<long long>() << "  E=" << format_complex(a)
            << "  oracle=" << format_complex(b) << "  |dE|=" << format_double(r["delta"].get<double>()) << "  ["
            << r["bc"].get<std::string>() << "]";
        if (r.contains("overlap")) out << "  overlap=" << format_double(r["overlap"].get<double>());
        if (r.contains("modulus_difference"))
            out << "  modulus_diff=" << format_double(r["modulus_difference"].get<double>());
        if (r.contains("analytic_nodes"))
            out << "  nodes=" << r["analytic_nodes"].get<int>() << "/" << r["oracle_nodes"].get<int>();
        out << "  " << (r["pass"].get<bool>() ? "PASS" : "FAIL");
        if (!r["note"].get<std::string>().empty()) out << "  (" << r["note"].get<std::string>() << ")";
        out << "\n";
    }
    out << "nodes monotone: " << (doc["nodes_monotone"].get<bool>() ? "yes" : "no")
        << "\nresult: " << (doc["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
}

void print_wavefunction(const Json& doc, std::ostream& out) {
    out << "x,re,im\n";
    const auto& xs = doc["x"];
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << format_double(xs[i].get<double>()) << ',' << format_double(doc["re"][i].get<double>()) << ','
            << format_double(doc["im"][i].get<double>()) << "\n";
}

int exit_code_for(ErrorKind k) { return k == ErrorKind::no_admissible_assignment ? exit_no_assignment : exit_invalid; }

}  // namespace

std::vector<double> sample_grid(double lo, double hi, int samples) {
    if (samples < 1) schema_error("--samples must be at least 1");
    std::vector<double> xs(samples);
    for (int i = 0; i < samples; ++i) xs[i] = samples == 1 ? lo : lo + (hi - lo) * i / (samples - 1);
    return xs;
}

ParamMap parse_params(const std::map<std::string, std::string>& text) {
    ParamMap p;
    for (const auto& [k, v] : text) {
        try {
            p[k] = Exact::parse(v);
        } catch (const std::exception&) {
            schema_error("parameter '" + k + "': cannot read '" + v + "' as a number");
        }
    }
    return p;
}

RunConfig parse_config(const std::vector<std::string>& args) {
    if (args.empty()) schema_error("missing command");
    RunConfig c;
    c.command = args[0];
    if (!kCommands.count(c.command)) schema_error("unknown command '" + c.command + "'");
    SplitArgs split = split_args({args.begin() + 1, args.end()});
    if (split.positional.size() > 1) schema_error("unexpected argument '" + split.positional[1] + "'");

    CLI::App app{"qhj"};
    std::string config_path, out_path;
    int levels = 0, points = 0, samples = 0;
    long long state = 0;
    double tol = 0.0;
    auto* json_flag = app.add_flag("--json");
    auto* csv_flag = app.add_flag("--csv");
    auto* out_opt = app.add_option("--out", out_path);
    auto* config_opt = app.add_option("--config", config_path);
    auto* levels_opt = app.add_option("--levels", levels)->check(CLI::PositiveNumber);
    auto* tol_opt = app.add_option("--tol", tol)->check(CLI::PositiveNumber);
    auto* points_opt = app.add_option("--points", points)->check(CLI::PositiveNumber);
    auto* state_opt = app.add_option("--state", state);
    auto* samples_opt = app.add_option("--samples", samples);
    std::vector<std::string> rev(split.options.rbegin(), split.options.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        schema_error(e.what());
    }
    if (json_flag->count() && csv_flag->count()) schema_error("--json and --csv are exclusive");

    if (config_opt->count()) apply_config_file(config_path, c);
    if (!split.positional.empty()) c.model = split.positional[0];
    for (const auto& [k, v] : split.params) c.params[k] = v;
    if (json_flag->count()) c.format = Format::json;
    if (csv_flag->count()) c.format = Format::csv;
    if (out_opt->count()) c.out = out_path;
    if (levels_opt->count()) c.levels = levels;
    if (tol_opt->count()) c.tol = tol;
    if (points_opt->count()) c.points = points;
    if (state_opt->count()) c.state = state;
    if (samples_opt->count()) c.samples = samples;
    if (c.levels < 1) schema_error("levels must be positive");
    if (c.command != "list" && c.model.empty()) schema_error(c.command + ": missing model id");
    if (c.command == "list" && !c.params.empty()) schema_error("list takes no model parameters");
    return c;
}

Json list_document(const std::vector<ModelId>& ids) {
    Json doc = Json::array();
    for (ModelId id : ids) {
        const ModelInfo& info = model_info(id);
        Json e;
        e["id"] = info.name;
        e["spectrum_class"] = to_string(info.spectrum);
        e["variable_map"] = info.variable_map;
        e["params"] = Json::array();
        for (const auto& p : info.params) e["params"].push_back(Json{{"name", p.name}, {"doc", p.doc}});
        doc.push_back(e);
    }
    return doc;
}

Json solve_document(const PotentialModel& model, const Spectrum& sp) {
    Json doc;
    doc["model"] = model.name;
    doc["params"] = Json::object();
    for (const auto& [k, v] : model.params) doc["params"][k] = v.str();
    doc["spectrum_class"] = to_string(model.spectrum);
    doc["outcome"] = to_string(sp.outcome.kind);
    doc["energy_formula"] = sp.outcome.energy_formula ? Json(*sp.outcome.energy_formula) : Json(nullptr);
    doc["qes_relations"] = Json::object();
    for (const auto& [label, rel] : sp.outcome.qes_relations) doc["qes_relations"][std::to_string(label)] = rel;
    doc["solutions"] = Json::array();
    for (const auto& s : sp.solutions) {
        Json r;
        r["set_label"] = s.assignment.set_label;
        r["residues"] = Json::array();
        for (const auto& x : s.assignment.residues) r["residues"].push_back(x.str());
        r["a0"] = s.assignment.a0.str();
        r["lambda1"] = s.assignment.lambda1.str();
        r["n"] = s.assignment.n;
        r["energy"] = complex_json(s.energy);
        r["energy_exact"] = s.exact_energy && s.exact_energy->is_exact() ? Json(s.exact_energy->str()) : Json(nullptr);
        r["formula_string"] = formula_for(sp.outcome, s.assignment.set_label);
        r["degeneracy"] = s.degeneracy;
        r["defective"] = s.defective;
        r["wavefunction_form"] = s.recipe.form();
        doc["solutions"].push_back(r);
    }
    return doc;
}

Json assignments_document(const PotentialModel& model, const std::vector<ResidueAssignment>& assignments) {
    Json doc;
    doc["model"] = model.name;
    doc["assignments"] = Json::array();
    for (const auto& a : assignments) {
        Json r;
        r["set_label"] = a.set_label;
        r["pole_branch"] = a.pole_branch;
        r["lambda_branch"] = a.lambda_branch;
        r["residues"] = Json::array();
        for (const auto& x : a.residues) r["residues"].push_back(x.str());
        r["a0"] = a.a0.str();
        r["lambda1"] = a.lambda1.str();
        r["n_value"] = a.n_value.str();
        r["energy"] = a.energy ? Json(a.energy->str()) : Json(nullptr);
        r["admissible"] = a.admissible;
        r["verdict"] = a.verdict;
        r["trace"] = Json::array();
        for (const auto& t : a.trace) r["trace"].push_back(Json{{"stage", t.stage}, {"passed", t.passed}, {"detail", t.detail}});
        doc["assignments"].push_back(r);
    }
    return doc;
}

Json verify_document(const VerifyReport& rep) {
    Json doc;
    doc["model"] = rep.model;
    doc["oracle"] = Json{{"kind", to_string(rep.setup.kind)},
                         {"lo", rep.setup.grid.lo},
                         {"hi", rep.setup.grid.hi},
                         {"points", rep.setup.grid.points},
                         {"bc", to_string(rep.setup.grid.bc)},
                         {"tol", rep.setup.tol}};
    doc["nodes_monotone"] = rep.nodes_monotone;
    doc["conjugate_closed"] = rep.conjugate_closed;
    doc["pass"] = rep.all_pass();
    doc["rows"] = Json::array();
    for (const auto& r : rep.rows) {
        Json j;
        j["set_label"] = r.set_label;
        j["n"] = r.n;
        j["analytic"] = complex_json(r.analytic);
        j["oracle"] = complex_json(r.oracle);
        j["delta"] = r.delta;
        j["error_estimate"] = r.error_estimate;
        j["bc"] = to_string(r.bc);
        if (r.has_overlap) j["overlap"] = r.overlap;
        if (r.has_modulus) j["modulus_difference"] = r.modulus_difference;
        if (r.has_nodes) {
            j["analytic_nodes"] = r.analytic_nodes;
            j["oracle_nodes"] = r.oracle_nodes;
        }
        j["pass"] = r.pass;
        j["note"] = r.note;
        doc["rows"].push_back(j);
    }
    return doc;
}

Json wavefunction_document(const PotentialModel& model, const BandEdgeSolution& state, const std::vector<double>& xs,
                           const std::vector<cplx>& values) {
    Json doc;
    doc["model"] = model.name;
    doc["energy"] = complex_json(state.energy);
    doc["set_label"] = state.assignment.set_label;
    doc["n"] = state.assignment.n;
    doc["wavefunction_form"] = state.recipe.form();
    doc["normalization"] = to_string(Normalization::sup_norm_one);
    doc["x"] = xs;
    Json re = Json::array(), im = Json::array();
    for (const auto& v : values) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    doc["re"] = re;
    doc["im"] = im;
    return doc;
}

std::vector<std::string> validate_solve_document(const Json& doc) {
    std::vector<std::string> bad;
    auto need = [&](const Json& obj, const std::string& key, bool (Json::*is)() const noexcept, const std::string& where) {
        if (!obj.is_object() || !obj.contains(key) || !(obj[key].*is)()) {
            bad.push_back(where + key + ": missing or wrong type");
            return false;
        }
        return true;
    };
    if (!doc.is_object()) return {"document: not an object"};
    need(doc, "model", &Json::is_string, "");
    need(doc, "params", &Json::is_object, "");
    need(doc, "spectrum_class", &Json::is_string, "");
    need(doc, "outcome", &Json::is_string, "");
    if (!doc.contains("energy_formula") || !(doc["energy_formula"].is_string() || doc["energy_formula"].is_null()))
        bad.push_back("energy_formula: missing or wrong type");
    if (need(doc, "qes_relations", &Json::is_object, ""))
        for (const auto& v : doc["qes_relations"])
            if (!v.is_string()) bad.push_back("qes_relations: values must be strings");
    if (!need(doc, "solutions", &Json::is_array, "")) return bad;
    for (std::size_t i = 0; i < doc["solutions"].size(); ++i) {
        const Json& s = doc["solutions"][i];
        const std::string at = "solutions[" + std::to_string(i) + "].";
        need(s, "set_label", &Json::is_number_integer, at);
        if (need(s, "residues", &Json::is_array, at))
            for (const auto& r : s["residues"])
                if (!r.is_string()) bad.push_back(at + "residues: entries must be strings");
        need(s, "a0", &Json::is_string, at);
        need(s, "lambda1", &Json::is_string, at);
        if (need(s, "n", &Json::is_number_integer, at) && s["n"].get<long long>() < 0) bad.push_back(at + "n: negative");
        if (need(s, "energy", &Json::is_object, at)) {
            need(s["energy"], "re", &Json::is_number, at + "energy.");
            need(s["energy"], "im", &Json::is_number, at + "energy.");
        }
        if (!s.contains("energy_exact") || !(s["energy_exact"].is_string() || s["energy_exact"].is_null()))
            bad.push_back(at + "energy_exact: missing or wrong type");
        need(s, "formula_string", &Json::is_string, at);
        if (need(s, "degeneracy", &Json::is_number_integer, at) && s["degeneracy"].get<int>() < 1)
            bad.push_back(at + "degeneracy: below 1");
        need(s, "defective", &Json::is_boolean, at);
        need(s, "wavefunction_form", &Json::is_string, at);
    }
    return bad;
}

std::string dump(const Json& doc) {
    std::string s;
    dump_to(doc, s);
    return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (args.empty() || args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
        (args.empty() ? err : out) << usage();
        return args.empty() ? exit_invalid : exit_ok;
    }
    if (std::find(args.begin(), args.end(), "--help") != args.end() ||
        std::find(args.begin(), args.end(), "-h") != args.end()) {
        out << usage();
        return exit_ok;
    }
    try {
        const RunConfig c = parse_config(args);
        std::ostringstream buf;
        int code = exit_ok;
        if (c.command == "list") {
            std::vector<ModelId> ids = all_models();
            if (!c.model.empty()) {
                auto id = model_id_from_string(c.model);
                if (!id) throw Error(ErrorKind::unknown_model, "unknown model '" + c.model + "'");
                ids = {*id};
            }
            Json doc = list_document(ids);
            if (c.format == Format::json)
                buf << dump(doc) << "\n";
            else
                print_list(doc, buf);
        } else {
            const PotentialModel model = get_model(c.model, parse_params(c.params));
            if (c.command == "solve") {
                Json doc = solve_document(model, solve_spectrum(model, c.levels));
                if (auto bad = validate_solve_document(doc); !bad.empty())
                    throw std::logic_error("solve output failed its schema: " + bad.front());
                if (c.format == Format::json)
                    buf << dump(doc) << "\n";
                else
                    print_solve(doc, c.format, buf);
            } else if (c.command == "assignments") {
                Json doc = assignments_document(model, enumerate_assignments(model, std::nullopt, c.levels));
                if (c.format == Format::json)
                    buf << dump(doc) << "\n";
                else
                    print_assignments(doc, c.format, buf);
            } else if (c.command == "verify") {
                VerifyOptions opt;
                opt.tol = c.tol;
                opt.levels = c.levels;
                opt.points = c.points;
                VerifyReport rep = verify_model(model, opt);
                Json doc = verify_document(rep);
                if (c.format == Format::json)
                    buf << dump(doc) << "\n";
                else
                    print_verify(doc, c.format, buf);
                if (!rep.all_pass()) code = exit_verify_failed;
            } else {
                const Spectrum sp = solve_spectrum(model, c.levels);
                if (c.state < 0 || c.state >= static_cast<long long>(sp.solutions.size()))
                    throw Error(ErrorKind::invalid_state, "state " + std::to_string(c.state) + " out of range: " +
                                                              std::to_string(sp.solutions.size()) + " states");
                const BandEdgeSolution& s = sp.solutions[static_cast<std::size_t>(c.state)];
                const auto xs = sample_grid(model.sample_interval.first, model.sample_interval.second, c.samples);
                const SampledWavefunction w = assemble(s.recipe, xs);
                Json doc = wavefunction_document(model, s, w.xs, w.values);
                if (c.format == Format::json)
                    buf << dump(doc) << "\n";
                else
                    print_wavefunction(doc, buf);
            }
        }
        if (c.out.empty()) {
            out << buf.str();
        } else {
            std::ofstream f(c.out, std::ios::binary);
            if (!(f << buf.str())) {
                err << "qhj: cannot write '" << c.out << "'\n";
                return exit_invalid;
            }
        }
        return code;
    } catch (const Error& e) {
        err << "qhj: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "qhj: " << e.what() << "\n";
        return exit_invalid;
    }
}

}  // namespace qhj::cli
