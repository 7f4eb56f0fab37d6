#include "CLI11.hpp"

#include "qalt/job.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"exact lambda-operations on hermitian forms over algebras with involution"};
    std::string command, input_path, out_path;
    qalt::JobParams cli_params;
    bool d_set = false, trunc_set = false, samples_set = false, seed_set = false;

    app.add_option("command", command,
                   "goldman | trace-form | invariants | lambda | det | check-axioms");
    app.add_option("--input", input_path, "job description file (JSON)")->required();
    auto* od = app.add_option("--d", cli_params.d, "power for the lambda command");
    auto* ot = app.add_option("--truncation", cli_params.truncation, "tensor-degree truncation");
    auto* on = app.add_option("--samples", cli_params.samples, "sample count for check-axioms");
    auto* os_ = app.add_option("--seed", cli_params.seed, "random seed for check-axioms");
    app.add_option("--out", out_path, "write a machine-readable JSON report here");
    app.add_flag("--emit-gram", cli_params.emit_gram, "print value tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    d_set = od->count() > 0;
    trunc_set = ot->count() > 0;
    samples_set = on->count() > 0;
    seed_set = os_->count() > 0;

    try {
        std::ifstream in(input_path);
        if (!in) {
            std::cerr << "error: cannot read " << input_path << "\n";
            return 2;
        }
        std::stringstream buf;
        buf << in.rdbuf();
        qalt::JobSpec spec = qalt::parse_job(buf.str());
        if (!command.empty()) spec.command = command;
        if (spec.command.empty()) {
            std::cerr << "error: no command given (argument or \"command\" field)\n";
            return 2;
        }
        if (d_set) spec.params.d = cli_params.d;
        if (trunc_set) spec.params.truncation = cli_params.truncation;
        if (samples_set) spec.params.samples = cli_params.samples;
        if (seed_set) spec.params.seed = cli_params.seed;
        if (cli_params.emit_gram) spec.params.emit_gram = true;

        qalt::JobResult result = qalt::run_job(spec);
        std::cout << result.text;
        if (!out_path.empty()) {
            std::ofstream out(out_path);
            out << result.json;
        }
        return result.exit_code;
    } catch (const qalt::CapExceeded& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
