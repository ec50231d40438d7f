#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "cashlot/extract.hpp"
#include "cashlot/mip.hpp"
#include "cashlot/simulate.hpp"
#include "cashlot/testbed.hpp"

using namespace cashlot;

int main(int argc, char** argv) {
    CLI::App app{"Cash-constrained lot-sizing solver and policy toolkit"};
    app.require_subcommand(1);

    // solve
    std::string instance_path, dump_path;
    auto* solve_cmd = app.add_subcommand("solve", "Solve the dynamic program");
    solve_cmd->add_option("--instance", instance_path, "instance JSON file")->required();
    solve_cmd->add_option("--dump", dump_path, "write value/action tables as CSV");

    // extract
    std::string extract_out;
    auto* extract_cmd =
        app.add_subcommand("extract", "Derive the (s, C(x), S) policy from the solved tables");
    extract_cmd->add_option("--instance", instance_path, "instance JSON file")->required();
    extract_cmd->add_option("--out", extract_out, "policy JSON output")->required();

    // heuristic
    std::string heur_out;
    auto* heur_cmd =
        app.add_subcommand("heuristic", "Compute the (s, C(x), S) policy by plan enumeration "
                                        "and newsvendor approximation");
    heur_cmd->add_option("--instance", instance_path, "instance JSON file")->required();
    heur_cmd->add_option("--out", heur_out, "policy JSON output")->required();

    // simulate
    std::string policy_path;
    long long samples = 100000;
    std::uint64_t seed = 42;
    std::optional<double> ref;
    std::string report_out;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo policy evaluation");
    sim_cmd->add_option("--instance", instance_path, "instance JSON file")->required();
    sim_cmd->add_option("--policy", policy_path,
                        "policy JSON file (omit to simulate the optimal actions)");
    sim_cmd->add_option("--samples", samples, "number of demand paths");
    sim_cmd->add_option("--seed", seed, "random seed");
    double ref_value = 0.0;
    auto* ref_opt = sim_cmd->add_option("--ref", ref_value, "reference value for the gap");
    sim_cmd->add_option("--out", report_out, "write the JSON report here instead of stdout");

    // bench
    RunOptions run_opt;
    bool subset = false;
    std::string out_dir = "report";
    auto* bench_cmd = app.add_subcommand("bench", "Run the benchmark grid");
    bench_cmd->add_option("--samples", run_opt.samples, "simulation paths per case");
    bench_cmd->add_option("--seed", run_opt.seed, "master seed");
    bench_cmd->add_flag("--subset", subset, "one case per pattern at K=20, p=5, capacity=6");
    bench_cmd->add_option("--jobs", run_opt.jobs, "parallel cases");
    bench_cmd->add_option("--time-budget", run_opt.solve_budget_seconds,
                          "per-solve budget in seconds");
    bench_cmd->add_flag("--stable-output", run_opt.stable_output,
                        "zero wall times so repeated runs are byte-identical");
    bench_cmd->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve_cmd) {
            ProblemInstance inst = load_instance(instance_path);
            SdpSolution sol = solve(inst);
            std::cout << "optimal expected cash increment: "
                      << sol.value_at(1, inst.x0, inst.R0) << "\n";
            std::cout << "first-period order at the initial state: "
                      << sol.action_at(1, inst.x0, inst.R0) << "\n";
            if (!dump_path.empty()) {
                dump_tables_csv(sol, dump_path);
                std::cout << "tables written to " << dump_path << "\n";
            }
        } else if (*extract_cmd) {
            ProblemInstance inst = load_instance(instance_path);
            SdpSolution sol = solve(inst);
            ScsPolicy policy = extract(sol, inst);
            save_policy(policy, extract_out);
            std::cout << "policy written to " << extract_out << "\n";
        } else if (*heur_cmd) {
            ProblemInstance inst = load_instance(instance_path);
            ScsPolicy policy = build_policy(inst);
            save_policy(policy, heur_out);
            std::cout << "policy written to " << heur_out << "\n";
        } else if (*sim_cmd) {
            ProblemInstance inst = load_instance(instance_path);
            if (ref_opt->count() > 0) ref = ref_value;
            SimulationReport rep;
            if (!policy_path.empty()) {
                ScsPolicy policy = load_policy(policy_path);
                ScsOrderPolicy runner(policy, inst);
                rep = simulate(inst, runner, samples, seed, ref);
            } else {
                SdpSolution sol = solve(inst);
                SdpArgmaxPolicy runner(sol);
                rep = simulate(inst, runner, samples, seed, ref);
            }
            const std::string text = report_to_json(rep);
            if (report_out.empty()) {
                std::cout << text << "\n";
            } else {
                std::ofstream out(report_out);
                out << text << "\n";
            }
        } else if (*bench_cmd) {
            auto cases = subset ? build_subset() : build_cases();
            GapReport report = run_cases(cases, run_opt);
            std::filesystem::create_directories(out_dir);
            write_case_csv(report, run_opt, out_dir + "/cases.csv");
            write_summary_markdown(report, run_opt, out_dir + "/summary.md");
            std::cout << "report written to " << out_dir << "\n";
            for (const auto& g : report.groups)
                if (g.label == "overall")
                    std::cout << "overall: sdp max " << 100 * g.sdp_max
                              << "% avg " << 100 * g.sdp_avg << "%, mip max "
                              << 100 * g.mip_max << "% avg " << 100 * g.mip_avg
                              << "%\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
