// Command-line front end: method inspection, order certification, linear
// stability scans and the experiment runner.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include "CLI11.hpp"

#include "splitting/bench.hpp"
#include "splitting/errors.hpp"
#include "splitting/linear.hpp"
#include "splitting/methods.hpp"
#include "splitting/order.hpp"
#include "splitting/processing.hpp"

using namespace splitting;

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
    return "(" + s + ")";
}

void write_or_print(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw ConfigurationError("cannot write '" + out + "'");
    f << text;
}

int cmd_method_show(const std::string& name) {
    const CompositionSpec spec = resolve_spec(name);
    std::cout << spec_to_json(spec) << '\n';
    if (spec.form != Form::Gamma) {
        const auto ab = to_ab(spec);
        std::cout << "a = " << join(ab.a) << "\nb = " << join(ab.b) << '\n';
        try {
            std::cout << "alpha = " << join(to_alpha(spec)) << '\n';
        } catch (const ConversionError& e) {
            std::cout << "alpha: not available (" << e.what() << ")\n";
        }
    }
    return 0;
}

int cmd_method_convert(const std::string& name, const std::string& to, const std::string& out) {
    const CompositionSpec spec = resolve_spec(name);
    CompositionSpec result;
    if (to == "alpha") {
        result = spec.is_splitting_form() ? ab_to_alpha(spec) : spec.form == Form::Beta ? beta_to_alpha(spec) : spec;
    } else if (to == "ab" || to == "bab") {
        result = to_ab(spec);
    } else {
        throw ConfigurationError("unknown target form '" + to + "' (use alpha or ab)");
    }
    write_or_print(spec_to_json(result) + "\n", out);
    return 0;
}

int cmd_method_validate(const std::string& path) {
    const CompositionSpec spec = load_spec(path);
    validate(spec);
    std::cout << path << ": valid " << to_string(spec.form) << " spec";
    if (!spec.label.empty()) std::cout << " '" << spec.label << "'";
    std::cout << '\n';
    return 0;
}

int cmd_order_certify(const std::string& name, int max_order, const std::string& assume, double tol, bool all) {
    const CompositionSpec spec = resolve_spec(name);
    const auto report = certify(spec, max_order, symmetry_from_string(assume), tol);
    std::cout << "method: " << (spec.label.empty() ? name : spec.label) << "\ncondition set: "
              << to_string(report.condition_set) << "\ncertified order: " << report.certified_order
              << " (checked through " << report.max_order_checked << ")\n";
    if (report.first_failure)
        std::cout << "first failure: " << report.first_failure->index.name() << " = "
                  << num(report.first_failure->residual) << '\n';
    if (all)
        for (const auto& c : report.conditions) std::cout << "  " << c.index.name() << " " << num(c.residual) << '\n';
    return 0;
}

int cmd_order_lyndon(int weight, bool odd_only) {
    for (const auto& w : lyndon_multiindices(weight))
        if (!odd_only || w.all_odd()) std::cout << w.name() << '\n';
    return 0;
}

int cmd_order_counts(int max_weight) {
    std::cout << "weight,n,m\n";
    for (int k = 1; k <= max_weight; ++k) {
        const auto c = count_conditions(k);
        std::cout << k << ',' << c.general << ',' << c.odd_only << '\n';
    }
    std::cout << "\norder,N,M\n";
    for (const auto& t : symmetric_condition_totals(max_weight + (max_weight % 2 == 1 ? 1 : 0)))
        std::cout << t.order << ',' << t.general << ',' << t.odd_only << '\n';
    return 0;
}

int cmd_order_effective(const std::string& kernel, const std::string& processor, int target) {
    const auto alpha = to_alpha(resolve_spec(kernel));
    bool ok = true;
    auto show = [&](const std::map<std::string, double>& r, const char* title) {
        std::cout << title << '\n';
        for (const auto& [k, v] : r) {
            std::cout << "  " << k << " = " << num(v) << '\n';
            ok = ok && std::abs(v) <= 1e-12;
        }
    };
    show(effective_order_conditions(alpha, target), "kernel conditions:");
    if (!processor.empty()) {
        const auto pspec = resolve_spec(processor);
        const auto gamma = pspec.form == Form::Gamma ? pspec.coeffs : to_alpha(pspec);
        show(processor_conditions(alpha, gamma, target), "processor conditions:");
    }
    std::cout << (ok ? "effective order " + std::to_string(target) + ": satisfied\n" : "effective order: not satisfied\n");
    return ok ? 0 : 1;
}

int cmd_stability(const std::string& name, double hmax, double dh, const std::string& emit, const std::string& out) {
    const CompositionSpec spec = resolve_spec(name);
    const double threshold = stability_threshold(spec);
    if (emit == "csv") {
        std::string text = "# threshold " + num(threshold) + "\nh,p,stable\n";
        for (const auto& r : stability_scan(spec, hmax, dh))
            text += num(r.h) + "," + num(r.p) + "," + (r.stable ? "1" : "0") + "\n";
        write_or_print(text, out);
    } else {
        std::cout << "stability threshold x* = " << num(threshold) << '\n';
    }
    return 0;
}

int cmd_bench_run(const std::string& config, const std::string& out) {
    const auto result = run_experiment(load_config(config));
    if (out.empty()) {
        result.write_csv(std::cout);
    } else {
        std::ofstream f(out);
        if (!f) throw ConfigurationError("cannot write '" + out + "'");
        result.write_csv(f);
    }
    return 0;
}

int cmd_bench_preset(const std::string& name, const std::string& out) {
    const auto preset = run_preset(name);
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) throw ConfigurationError("cannot write '" + out + "'");
        preset.result.write_csv(f);
    }
    for (const auto& c : preset.checks)
        std::cerr << (c.passed ? "[pass] " : "[FAIL] ") << c.name << ": " << c.detail << '\n';
    return preset.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Splitting and composition methods: order conditions, stability and experiments"};
    app.require_subcommand(1);
    int status = 0;

    auto* method = app.add_subcommand("method", "Inspect, convert and validate coefficient specs");
    method->require_subcommand(1);
    std::string m_name, m_to = "alpha", m_out;
    auto* m_show = method->add_subcommand("show", "Print a spec and its equivalent forms");
    m_show->add_option("method", m_name, "Catalog name or spec file")->required();
    m_show->callback([&] { status = cmd_method_show(m_name); });
    auto* m_conv = method->add_subcommand("convert", "Convert a spec to another coefficient form");
    m_conv->add_option("method", m_name, "Catalog name or spec file")->required();
    m_conv->add_option("--to", m_to, "Target form: alpha, ab or bab")->check(CLI::IsMember({"alpha", "ab", "bab"}));
    m_conv->add_option("--out", m_out, "Output file (default: stdout)");
    m_conv->callback([&] { status = cmd_method_convert(m_name, m_to, m_out); });
    auto* m_val = method->add_subcommand("validate", "Check a spec file");
    m_val->add_option("file", m_name, "Spec file")->required()->check(CLI::ExistingFile);
    m_val->callback([&] { status = cmd_method_validate(m_name); });

    auto* order = app.add_subcommand("order", "Order conditions");
    order->require_subcommand(1);
    std::string o_method, o_assume = "general", o_kernel, o_processor;
    int o_max = 6, o_weight = 4, o_target = 4;
    double o_tol = 1e-12;
    bool o_all = false, o_odd = false;
    auto* o_cert = order->add_subcommand("certify", "Certify the order of a method");
    o_cert->add_option("--method", o_method, "Catalog name or spec file")->required();
    bool o_symmetric = false;
    o_cert->add_option("--max-order,--max", o_max, "Highest order checked")->check(CLI::Range(1, 12));
    auto* assume_opt = o_cert->add_option("--assume", o_assume, "general, time_symmetric, odd_only or both");
    o_cert->add_flag("--assume-symmetric", o_symmetric, "Same as --assume time_symmetric")->excludes(assume_opt);
    o_cert->add_option("--tol", o_tol, "Residual tolerance");
    o_cert->add_flag("--all", o_all, "List every residual");
    o_cert->callback([&] {
        status = cmd_order_certify(o_method, o_max, o_symmetric ? "time_symmetric" : o_assume, o_tol, o_all);
    });
    auto* o_lyn = order->add_subcommand("lyndon", "List Lyndon multi-indices of a weight");
    o_lyn->add_option("--weight", o_weight, "Weight")->required()->check(CLI::Range(1, 14));
    o_lyn->add_flag("--odd", o_odd, "Only indices with all entries odd");
    o_lyn->callback([&] { status = cmd_order_lyndon(o_weight, o_odd); });
    auto* o_cnt = order->add_subcommand("counts", "Number of order conditions per weight");
    o_cnt->add_option("--max", o_max, "Largest weight")->check(CLI::Range(1, 20));
    o_cnt->callback([&] { status = cmd_order_counts(o_max); });
    auto* o_eff = order->add_subcommand("effective", "Effective-order conditions of a processed method");
    o_eff->add_option("--kernel", o_kernel, "Kernel spec")->required();
    o_eff->add_option("--processor", o_processor, "Processor spec (GAMMA form)");
    o_eff->add_option("--target", o_target, "4 or 5")->check(CLI::IsMember({4, 5}));
    o_eff->callback([&] { status = cmd_order_effective(o_kernel, o_processor, o_target); });

    std::string s_method, s_emit = "text", s_out;
    double s_hmax = 4.0, s_dh = 0.01;
    auto* stab = app.add_subcommand("stability", "Linear stability on the harmonic oscillator");
    stab->add_option("--method", s_method, "Catalog name or spec file")->required();
    stab->add_option("--hmax", s_hmax, "Largest step in the scan")->check(CLI::PositiveNumber);
    stab->add_option("--dh", s_dh, "Scan spacing")->check(CLI::PositiveNumber);
    stab->add_option("--emit", s_emit, "text or csv")->check(CLI::IsMember({"text", "csv"}));
    stab->add_option("--out", s_out, "Output file for csv");
    stab->callback([&] { status = cmd_stability(s_method, s_hmax, s_dh, s_emit, s_out); });

    auto* bench = app.add_subcommand("bench", "Numerical experiments");
    bench->require_subcommand(1);
    std::string b_config, b_out, b_preset;
    auto* b_run = bench->add_subcommand("run", "Run an experiment config");
    b_run->add_option("--config", b_config, "Experiment JSON")->required()->check(CLI::ExistingFile);
    b_run->add_option("--out", b_out, "CSV output (default: stdout)");
    b_run->callback([&] { status = cmd_bench_run(b_config, b_out); });
    auto* b_pre = bench->add_subcommand("preset", "Run a built-in experiment preset; exit code 1 if a check fails");
    b_pre->add_option("name", b_preset, "Preset name")->required()->check(CLI::IsMember(preset_names()));
    b_pre->add_option("--out", b_out, "CSV output");
    b_pre->callback([&] { status = cmd_bench_preset(b_preset, b_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const splitting::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return status;
}
