#include "cli.hpp"

#include "faberlab/asymptotics.hpp"
#include "faberlab/curve_spec.hpp"
#include "faberlab/exact_lens.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>

namespace faberlab::cli {

using nlohmann::ordered_json;

namespace {

// ---- tables -------------------------------------------------------------------

struct Table
{
    std::string name;
    unsigned precision_bits = 0;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

void write_text(const std::filesystem::path& file, const std::string& text)
{
    std::ofstream out(file, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + file.string() + "'");
    out << text;
    if (!out)
        throw std::runtime_error("write failed for '" + file.string() + "'");
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"')
            quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

std::string csv_line(const std::vector<std::string>& fields)
{
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i)
        line += (i ? "," : "") + csv_field(fields[i]);
    return line + "\n";
}

void write_table(const Table& t, const RunConfig& config)
{
    if (config.formats.count(Format::csv)) {
        std::string text = "# precision_bits=" + std::to_string(t.precision_bits) + "\n" + csv_line(t.columns);
        for (const auto& row : t.rows)
            text += csv_line(row);
        write_text(config.out / (t.name + ".csv"), text);
    }
    if (config.formats.count(Format::json)) {
        ordered_json rows = ordered_json::array();
        for (const auto& row : t.rows) {
            ordered_json obj;
            for (std::size_t i = 0; i < t.columns.size(); ++i)
                obj[t.columns[i]] = row[i];
            rows.push_back(obj);
        }
        const ordered_json doc{{"precision_bits", t.precision_bits}, {"columns", t.columns}, {"rows", rows}};
        write_text(config.out / (t.name + ".json"), doc.dump(2) + "\n");
    }
}

void write_json(const std::filesystem::path& file, const ordered_json& doc)
{
    write_text(file, doc.dump(2) + "\n");
}

std::string flag(bool b)
{
    return b ? "1" : "0";
}

ordered_json tally_json(const lens::CheckTally& t)
{
    ordered_json out{{"name", t.name}, {"checked", t.checked}, {"passed", t.passed}};
    out["first_failure"] = t.first_failure ? ordered_json(*t.first_failure) : ordered_json(nullptr);
    return out;
}

QuadratureRule rule_for(double tol)
{
    QuadratureRule rule;
    rule.target_tolerance = tol;
    return rule;
}

CurveSpec resolve_curve(const std::string& name)
{
    if ((name == "lens" || name == "circle") && !std::filesystem::exists(name))
        return builtin_curve(name);
    try {
        return load_curve_spec(name);
    } catch (const CurveSpecError& e) {
        throw ConfigError(e.what());
    }
}

// ---- lens-exact ---------------------------------------------------------------

int cmd_lens_exact(const RunConfig& config, std::ostream& log)
{
    const unsigned N = config.n_max;
    const unsigned bits = config.precision_bits;
    const unsigned exact_top = std::min(N, config.exact_max);
    ScopedPrecision scope(bits);

    const lens::LensSequences seq(exact_top);
    const std::vector<PiLinear> closed = seq.i_diag_all();
    const std::vector<lens::AuditedReal> audited = lens::i_diag_float(N, bits);

    Table table{"sequences", bits, {"n", "a_n", "b_n", "I_{n+1,n+1}", "I_{n+1,n+1}_float", "I_float_error_bound"}, {}};
    lens::CheckTally audit{"float_audit", 0, 0, std::nullopt};
    lens::CheckTally bounds{"I_in_[0,0.3]", 0, 0, std::nullopt};
    for (unsigned n = 0; n <= N; ++n) {
        const bool exact = n <= exact_top;
        std::vector<std::string> row{std::to_string(n)};
        row.push_back(exact ? seq.a(n).to_string() : "");
        row.push_back(exact ? seq.b(n).to_string() : "");
        row.push_back(exact ? closed[n].to_string() : "");
        row.push_back(to_decimal(audited[n].value));
        row.push_back(to_decimal(audited[n].error_bound));
        table.rows.push_back(std::move(row));
        if (exact) {
            const Real reference = closed[n].to_real(bits + 64);
            audit.record(n, abs(Real(audited[n].value) - reference) <= audited[n].error_bound);
            if (n <= 1000)
                bounds.record(n, audited[n].value >= 0 && audited[n].value <= Real(0.3));
        }
    }
    write_table(table, config);

    std::vector<lens::CheckTally> tallies{lens::check_a_forms(exact_top),
                                          lens::check_b_forms(exact_top),
                                          lens::check_g_forms(std::min(exact_top, 512u)),
                                          lens::check_ab_step(exact_top),
                                          lens::check_square_sum_identity(exact_top),
                                          lens::check_by_parts(exact_top / 2),
                                          audit,
                                          bounds};

    // the even-index relation, printed and with the subtracted sum halved
    const unsigned even_N = config.exact_max >= 2 ? std::min(1000u, (config.exact_max - 2) / 2) : 0;
    const lens::LensSequences even_seq(2 * even_N + 2);
    const auto even_rows = lens::even_relation_rows(even_seq, even_N);
    lens::CheckTally printed{"even_relation_printed", 0, 0, std::nullopt};
    lens::CheckTally halved{"even_relation_halved", 0, 0, std::nullopt};
    for (const auto& r : even_rows) {
        printed.record(r.N, r.printed_matches);
        halved.record(r.N, r.halved_matches);
    }
    const lens::EvenRelationRow& first = even_rows.front();

    // numeric oracle for ||E_2'||^2 = I_{2,2}
    const Estimate<Real> green = green_deriv_norm<Real>(e_tail(2, lens_map()), lens_boundary(), rule_for(config.tol));
    const Real printed_diff = abs(first.printed.to_real(bits) - green.value);
    const Real halved_diff = abs(first.halved.to_real(bits) - green.value);
    const Real closed_diff = abs(first.closed.to_real(bits) - green.value);
    const Real slack = green.error + Real(config.tol);
    const bool oracle_agrees = halved_diff <= slack && closed_diff <= slack && printed_diff > slack;

    bool identities_ok = halved.ok() && oracle_agrees;
    ordered_json identities = ordered_json::array();
    for (const auto& t : tallies) {
        identities.push_back(tally_json(t));
        identities_ok = identities_ok && t.ok();
    }

    ordered_json even{
        {"relation", "I_{2N+2,2N+2} = (2N+2)/(2N+1) * I_{2N+1,2N+1} - s * sum_{j=0}^{N} a_{2j}^2 / (2N+1)"},
        {"N_max", even_N},
        {"printed",
         {{"s", "1"},
          {"N0_predicted", first.printed.to_string()},
          {"N0_predicted_float", to_decimal(first.printed.to_real(bits))},
          {"N0_predicted_negative", first.printed.to_real(bits) < 0},
          {"holds_at_N0", first.printed_matches},
          {"checked", printed.checked},
          {"passed", printed.passed}}},
        {"corrected",
         {{"s", "1/2"},
          {"N0_predicted", first.halved.to_string()},
          {"checked", halved.checked},
          {"passed", halved.passed},
          {"holds_for_all", halved.ok()}}},
        {"closed_form_N0", first.closed.to_string()},
        {"green_oracle",
         {{"n", 2},
          {"numeric", to_decimal(green.value)},
          {"error_estimate", to_decimal(green.error)},
          {"tolerance", to_decimal(config.tol)},
          {"printed_abs_diff", to_decimal(printed_diff)},
          {"corrected_abs_diff", to_decimal(halved_diff)},
          {"closed_abs_diff", to_decimal(closed_diff)},
          {"agrees_with_corrected_not_printed", oracle_agrees}}},
    };
    ordered_json checks{{"precision_bits", bits},   {"n_max", N},
                        {"exact_max", config.exact_max}, {"identities", identities},
                        {"even_relation", even},    {"ok", identities_ok}};
    write_json(config.out / "checks.json", checks);

    for (const auto& t : tallies)
        log << t.name << ": " << t.passed << "/" << t.checked << "\n";
    log << "even relation as printed fails at N=0 (" << first.printed.to_string() << " vs "
        << first.closed.to_string() << "); halved form " << halved.passed << "/" << halved.checked << "\n";
    return identities_ok ? exit_ok : exit_identity;
}

// ---- verify -------------------------------------------------------------------

int cmd_verify(const RunConfig& config, std::ostream& log)
{
    if (config.curves.size() > 1)
        throw ConfigError("verify takes a single --curve");
    const CurveSpec curve = resolve_curve(config.curves.empty() ? "lens" : config.curves.front());
    const bool is_lens = curve.map == lens_map() && curve.path == lens_boundary();
    const bool is_circle = curve.map == circle_map() && curve.path == unit_circle_boundary();
    if (!is_lens && !is_circle)
        throw ConfigError("verify needs a curve with known exact values (the lens or the unit circle)");

    const unsigned bits = config.precision_bits;
    ScopedPrecision scope(bits);
    const lens::LensSequences seq(is_lens ? config.n_max : 0);
    const QuadratureRule rule = rule_for(config.tol);
    const Real tol(config.tol);

    Table table{"verify", bits, {"n", "exact", "exact_float", "numeric", "abs_diff", "error_estimate", "converged", "pass"}, {}};
    unsigned failures = 0;
    for (unsigned n = 1; n <= config.n_max; ++n) {
        const PiLinear exact = is_lens ? seq.i_diag(n - 1) : PiLinear();
        const Real exact_value = exact.to_real(bits);
        std::string numeric_text, error_text;
        Real numeric;
        bool converged = true;
        try {
            const Estimate<Real> est = remainder_norm<Real>(n, curve.map, curve.path, rule);
            numeric = est.value;
            numeric_text = to_decimal(est.value);
            error_text = to_decimal(est.error);
        } catch (const NonConvergence& e) {
            converged = false;
            numeric = Real(e.last_value);
            numeric_text = to_decimal(e.last_value);
            error_text = to_decimal(e.last_error);
        }
        const Real diff = abs(numeric - exact_value);
        const bool pass = converged && diff <= tol;
        failures += pass ? 0 : 1;
        table.rows.push_back({std::to_string(n), exact.to_string(), to_decimal(exact_value), numeric_text, to_decimal(diff),
                              error_text, flag(converged), flag(pass)});
    }
    write_table(table, config);
    log << "verify " << curve.name << ": " << (config.n_max - failures) << "/" << config.n_max << " rows within "
        << config.tol << "\n";
    return failures ? exit_tolerance : exit_ok;
}

// ---- alpha --------------------------------------------------------------------

constexpr double kBoundSlack = 1e-8;

int cmd_alpha(const RunConfig& config, std::ostream& log)
{
    if (config.curves.size() > 1)
        throw ConfigError("alpha takes a single --curve");
    const CurveSpec curve = resolve_curve(config.curves.empty() ? "lens" : config.curves.front());
    AlphaOptions options;
    options.precision_bits = config.precision_bits;
    options.max_precision_bits = std::max(2048u, config.precision_bits);
    options.tol = config.tol;
    options.decomposition_max = config.decomposition_max;
    const AlphaRun run = run_alpha(curve.path, curve.map, config.n_max, options);
    ScopedPrecision scope(run.precision_bits);

    Table table{"alpha",
                run.precision_bits,
                {"n", "lambda_n", "alpha_n", "n*alpha_n", "lower_bound", "decomposition_residual", "alpha_error", "bound_satisfied"},
                {}};
    unsigned bound_failures = 0, decomposition_failures = 0;
    for (const AlphaRow<Real>& row : run.rows) {
        const bool bound_ok = row.lower_bound && row.alpha >= *row.lower_bound - Real(kBoundSlack);
        bound_failures += bound_ok ? 0 : 1;
        if (row.decomposition_residual && *row.decomposition_residual > Real(kBoundSlack))
            ++decomposition_failures;
        table.rows.push_back({std::to_string(row.n), to_decimal(row.lambda), to_decimal(row.alpha),
                              to_decimal(row.n_alpha), row.lower_bound ? to_decimal(*row.lower_bound) : "",
                              row.decomposition_residual ? to_decimal(*row.decomposition_residual) : "",
                              to_decimal(row.alpha_error), flag(bound_ok)});
    }
    write_table(table, config);
    log << "alpha " << curve.name << ": n <= " << config.n_max << " at " << run.precision_bits << " bits ("
        << run.attempts << " attempt" << (run.attempts == 1 ? "" : "s") << "), lower bound violations "
        << bound_failures << ", decomposition residuals above " << kBoundSlack << ": " << decomposition_failures << "\n";
    return bound_failures || decomposition_failures ? exit_tolerance : exit_ok;
}

// ---- sweep --------------------------------------------------------------------

std::string file_label(const std::string& name)
{
    std::string out;
    for (char c : name)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out;
}

std::string opt_decimal(const std::optional<double>& v)
{
    return v ? to_decimal(*v) : "";
}

ordered_json opt_json(const std::optional<double>& v)
{
    return v ? ordered_json(to_decimal(*v)) : ordered_json(nullptr);
}

int cmd_sweep(const RunConfig& config, std::ostream& log)
{
    const std::vector<std::string> names = config.curves.empty() ? std::vector<std::string>{"lens", "circle"} : config.curves;
    std::vector<SweepCurve> curves;
    std::set<std::string> labels;
    for (const std::string& name : names) {
        CurveSpec spec = resolve_curve(name);
        if (!labels.insert(file_label(spec.name)).second)
            throw ConfigError("two curves share the name '" + spec.name + "'");
        curves.push_back({spec.name, std::move(spec.map), std::move(spec.path)});
    }
    SweepOptions options;
    options.tol = config.tol;
    const std::vector<SequenceReport> reports = curve_sweep(curves, config.n_max, options);

    Table table{"sweep", 53, {"curve", "n", "value", "scaled_value", "running_extrapolation", "model_fit"}, {}};
    ordered_json summary_curves = ordered_json::array();
    std::filesystem::create_directories(config.out / "data");
    bool any_failure = false;
    for (const SequenceReport& r : reports) {
        std::string data = "# precision_bits=53\n# n value\n";
        for (const ReportRow& row : r.rows) {
            table.rows.push_back({r.label, std::to_string(row.n), to_decimal(row.value), to_decimal(row.scaled_value),
                                  opt_decimal(row.running_extrapolation), opt_decimal(row.model_fit)});
            data += std::to_string(row.n) + " " + to_decimal(row.value) + "\n";
        }
        write_text(config.out / "data" / (file_label(r.label) + ".dat"), data);
        ordered_json c{{"curve", r.label},
                       {"points", r.rows.size()},
                       {"classification", to_string(r.classification)},
                       {"model", r.model ? ordered_json(to_string(*r.model)) : ordered_json(nullptr)},
                       {"estimated_limit", opt_json(r.estimated_limit)},
                       {"estimated_liminf", opt_json(r.estimated_liminf)},
                       {"fit_residual", opt_json(r.fit_residual)},
                       {"failure", r.failure ? ordered_json(*r.failure) : ordered_json(nullptr)}};
        summary_curves.push_back(c);
        any_failure = any_failure || r.failure.has_value();
        log << r.label << ": " << to_string(r.classification);
        if (r.estimated_limit)
            log << ", limit " << *r.estimated_limit;
        if (r.failure)
            log << " (failed: " << *r.failure << ")";
        log << "\n";
    }
    write_table(table, config);

    const ClassifierConfig& cc = options.classifier;
    ordered_json summary{{"precision_bits", 53},
                         {"n_max", config.n_max},
                         {"quadrature_tolerance", to_decimal(config.tol)},
                         {"classifier",
                          {{"min_points", cc.min_points},
                           {"significance", to_decimal(cc.significance)},
                           {"noise_floor", to_decimal(cc.noise_floor)}}},
                         {"curves", summary_curves}};

    if (config.limit_n_max > 0) {
        const unsigned bits = config.precision_bits;
        const LensLimitReport t = lens_limit_check(config.limit_n_max, bits);
        ScopedPrecision scope(bits);
        Table rows{"lens_limit", bits, {"N", "I_{2N+1,2N+1}", "distance", "scaled_distance"}, {}};
        for (const LensLimitRow& row : t.rows)
            rows.rows.push_back({std::to_string(row.N), to_decimal(row.value), to_decimal(row.distance),
                                 to_decimal(row.scaled_distance)});
        write_table(rows, config);
        std::string data = "# precision_bits=" + std::to_string(bits) + "\n# N I_{2N+1,2N+1}\n";
        for (const LensLimitRow& row : t.samples)
            data += std::to_string(row.N) + " " + to_decimal(row.value) + "\n";
        write_text(config.out / "data" / "lens_limit.dat", data);
        summary["lens_limit"] = {{"N_max", t.N_max},
                               {"precision_bits", t.precision_bits},
                               {"model", to_string(t.fit.model)},
                               {"limit", to_decimal(t.fit.limit)},
                               {"target", to_decimal(1 / (2 * std::numbers::pi))},
                               {"limit_error", to_decimal(t.limit_error)},
                               {"scaled_limit", to_decimal(t.scaled_limit)},
                               {"fit_coefficient", to_decimal(t.fit.coefficient)},
                               {"fit_residual", to_decimal(t.fit.residual)},
                               {"distance_decreasing", t.distance_decreasing},
                               {"envelope_constant", opt_json(t.envelope_constant)},
                               {"envelope_decreasing", t.envelope_decreasing}};
        log << "lens limit (N <= " << t.N_max << "): " << t.fit.limit << ", error " << t.limit_error << "\n";
    }
    write_json(config.out / "sweep_summary.json", summary);
    return any_failure ? exit_tolerance : exit_ok;
}

// ---- parsing ------------------------------------------------------------------

struct CommandInfo
{
    const char* name;
    const char* help;
    unsigned n_max;
    double tol;
};

constexpr CommandInfo kCommands[] = {
    {"lens-exact", "exact lens sequences, identity checks and the even-index relation record", 100, 1e-20},
    {"verify", "boundary quadrature of ||E_n'||^2 against exact values", 32, 1e-9},
    {"alpha", "Bergman leading coefficients, alpha_n, lower bounds and decomposition residuals", 30, 1e-10},
    {"sweep", "||E_n'||^2 trends and classification over curves, plus the lens limit report", 32, 1e-12},
};

class Parser
{
public:
    Parser() : app_("faberlab: Faber and Bergman polynomial diagnostics")
    {
        app_.require_subcommand(1, 1);
        app_.set_config("--config", "", "TOML or INI file with the same settings as the flags");
        app_.allow_config_extras(CLI::config_extras_mode::error);
        for (const CommandInfo& info : kCommands)
            add_command(info);
    }

    CLI::App& app() { return app_; }

    /// Throws CLI::ParseError (including help requests) and ConfigError.
    RunConfig parse(const std::vector<std::string>& args)
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app_.parse(reversed);
        std::string command;
        for (const auto& [name, sub] : subs_)
            if (sub->parsed())
                command = name;
        RunConfig config = configs_.at(command);
        config.command = command;
        if (!formats_.at(command).empty()) {
            config.formats.clear();
            for (const std::string& f : formats_.at(command))
                config.formats.insert(f == "csv" ? Format::csv : Format::json);
        }
        if (command == "sweep" && config.limit_n_max > 0 && config.limit_n_max < 10)
            throw ConfigError("--limit-n-max must be 0 or at least 10");
        if (command == "sweep" && config.n_max < 1)
            throw ConfigError("--n-max must be positive for sweep");
        return config;
    }

private:
    void add_command(const CommandInfo& info)
    {
        const std::string name = info.name;
        CLI::App* sub = app_.add_subcommand(name, info.help);
        RunConfig& config = configs_[name];
        std::vector<std::string>& formats = formats_[name];
        sub->allow_config_extras(CLI::config_extras_mode::error);
        sub->add_option("--n-max", config.n_max, "largest index")->default_val(info.n_max)->check(CLI::NonNegativeNumber);
        sub->add_option("--precision-bits", config.precision_bits, "MPFR working precision")
            ->default_val(256)
            ->check(CLI::Range(16u, 1u << 16));
        sub->add_option("--tol", config.tol, "quadrature tolerance")->default_val(info.tol)->check(CLI::PositiveNumber);
        sub->add_option("--out", config.out, "output directory")->default_val(".");
        sub->add_option("--format", formats, "csv and/or json (repeatable)")->check(CLI::IsMember({"csv", "json"}));
        if (name == "lens-exact")
            sub->add_option("--exact-max", config.exact_max, "largest n computed in exact arithmetic")->default_val(4000);
        if (name != "lens-exact") {
            auto* curve = sub->add_option("--curve", config.curves, "curve spec file (or the built-in lens / circle)");
            if (name != "sweep")
                curve->expected(1);
        }
        if (name == "alpha")
            sub->add_option("--decomposition-max", config.decomposition_max, "decomposition residual for n <= this")->default_val(16);
        if (name == "sweep")
            sub->add_option("--limit-n-max", config.limit_n_max, "N_max of the lens limit report (0 skips it)")
                ->default_val(2000);
        subs_[name] = sub;
    }

    CLI::App app_;
    // one storage per command so that defaults of one cannot leak into another
    std::map<std::string, RunConfig> configs_;
    std::map<std::string, std::vector<std::string>> formats_;
    std::map<std::string, CLI::App*> subs_;
};

} // namespace

RunConfig parse_command_line(const std::vector<std::string>& args)
{
    Parser parser;
    try {
        return parser.parse(args);
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
}

int execute(const RunConfig& config, std::ostream& log)
{
    std::error_code ec;
    std::filesystem::create_directories(config.out, ec);
    if (ec)
        throw ConfigError("cannot create output directory '" + config.out.string() + "': " + ec.message());
    if (config.command == "lens-exact")
        return cmd_lens_exact(config, log);
    if (config.command == "verify")
        return cmd_verify(config, log);
    if (config.command == "alpha")
        return cmd_alpha(config, log);
    if (config.command == "sweep")
        return cmd_sweep(config, log);
    throw ConfigError("unknown command '" + config.command + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Parser parser;
    RunConfig config;
    try {
        config = parser.parse(args);
    } catch (const CLI::ParseError& e) {
        // help requests exit 0, everything else is a usage error
        return parser.app().exit(e, out, err) == 0 ? exit_ok : exit_config;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    }
    try {
        return execute(config, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_runtime;
    }
}

} // namespace faberlab::cli
