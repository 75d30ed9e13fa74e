#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "arproc/errors.hpp"
#include "arproc/runner.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw arproc::SchemaError("cannot open config file '" + path + "'", "config");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transform and simulation toolkit for reflected autoregressive recursions"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<double> r_override;
    std::vector<double> s_override;
    int steps_override = -1;
    int order_override = -1;
    std::string format_override;
    std::string out_override;

    for (const char* name :
         {"stability", "stationary", "transient", "moments", "iterate", "simulate", "validate"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("-c,--config", config_path, "JSON config file")->required();
        sub->add_option("--r", r_override, "override r_values");
        sub->add_option("--s", s_override, "override s_grid");
        sub->add_option("--steps", steps_override, "override iterate_steps");
        sub->add_option("--order", order_override, "override moments_order");
        sub->add_option("--format", format_override, "csv or json");
        sub->add_option("--out", out_override, "output path ('-' for stdout)");
    }

    CLI11_PARSE(app, argc, argv);
    std::string sub = app.get_subcommands().front()->get_name();

    try {
        arproc::RunConfig cfg = arproc::parse_config(slurp(config_path));
        if (!r_override.empty()) cfg.r_values = r_override;
        if (!s_override.empty()) cfg.s_grid = s_override;
        if (steps_override > 0) cfg.iterate_steps = steps_override;
        if (order_override > 0) cfg.moments_order = order_override;
        if (!format_override.empty()) {
            if (format_override != "csv" && format_override != "json")
                throw arproc::SchemaError("--format must be csv or json", "output.format");
            cfg.output_format = format_override;
        }
        if (!out_override.empty()) cfg.output_path = out_override;

        if (cfg.output_path == "-") return arproc::run(sub, cfg, std::cout);
        std::ofstream out(cfg.output_path);
        if (!out)
            throw arproc::SchemaError("cannot open output path '" + cfg.output_path + "'",
                                      "output.path");
        return arproc::run(sub, cfg, out);
    } catch (const arproc::SchemaError& e) {
        std::cerr << "{\"error\":{\"type\":\"SchemaError\",\"message\":"
                  << nlohmann::json(std::string(e.what())).dump() << "}}\n";
        return 2;
    } catch (const arproc::Error& e) {
        std::cerr << "{\"error\":{\"type\":\"Error\",\"message\":"
                  << nlohmann::json(std::string(e.what())).dump() << "}}\n";
        return 3;
    }
}
