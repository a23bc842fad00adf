#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commdiff/errors.hpp"
#include "commdiff/report.hpp"
#include "commdiff/synthgen.hpp"

namespace {

using StageFn = std::function<void(const commdiff::PipelineConfig&)>;

struct StageCommand {
    const char* name;
    const char* description;
    StageFn run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"commdiff: divergence between academic and social reception of a corpus"};
    app.require_subcommand(1);

    const StageCommand stages[] = {
        {"ingest", "load and link articles and tweets, write coverage statistics",
         commdiff::stage_ingest},
        {"sentiment", "score tweet sentiment against the lexicon", commdiff::stage_sentiment},
        {"topics", "train topic models, select k, assign topics", commdiff::stage_topics},
        {"impact", "per-article academic and social impact scores", commdiff::stage_impact},
        {"concern", "per-topic concern scores", commdiff::stage_concern},
        {"correlate", "significance-tested correlation tables", commdiff::stage_correlate},
        {"report", "full pipeline run", commdiff::run_pipeline},
    };

    struct Invocation {
        StageFn run;
        std::string config_path;
        std::string out_override;
    };
    Invocation invocation;

    for (const auto& stage : stages) {
        auto* sub = app.add_subcommand(stage.name, stage.description);
        auto config_opt = std::make_shared<std::string>();
        auto out_opt = std::make_shared<std::string>();
        sub->add_option("--config", *config_opt, "pipeline config file")->required();
        sub->add_option("--out", *out_opt, "override the configured output directory");
        StageFn run = stage.run;
        sub->callback([&invocation, config_opt, out_opt, run] {
            invocation = {run, *config_opt, *out_opt};
        });
    }

    auto* synth = app.add_subcommand("synthgen", "generate a planted-topic synthetic corpus");
    std::string synth_spec_path, synth_out;
    synth->add_option("--config", synth_spec_path, "synthetic corpus spec file")->required();
    synth->add_option("--out", synth_out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            commdiff::SynthSpec spec = commdiff::load_synth_spec(synth_spec_path);
            commdiff::generate_synthetic_corpus(spec, synth_out);
            std::cerr << "[synthgen] corpus written to " << synth_out << "\n";
            return 0;
        }
        commdiff::PipelineConfig config = commdiff::load_config(invocation.config_path);
        if (!invocation.out_override.empty()) config.out_dir = invocation.out_override;
        invocation.run(config);
        return 0;
    } catch (const commdiff::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const commdiff::ComputeError& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
