#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dirac/brackets.hpp"
#include "dirac/canonical.hpp"
#include "dirac/conjecture.hpp"
#include "dirac/error.hpp"
#include "dirac/parser.hpp"
#include "dirac/report.hpp"

#ifndef DIRAC_MODELS_DIR
#define DIRAC_MODELS_DIR "models"
#endif

namespace {

using namespace dirac;

enum class Stage { lagrangian, canonical, brackets, conjecture, all };

struct RunConfig {
    std::vector<std::string> files;
    bool corpus = false;
    bool json = false;
    Stage stage = Stage::all;
    int max_order = -1;
    int degree_cap = -1;
    std::string out_dir;
};

// exit codes: 0 clean, 1 analysis outcome (second class, inconclusive),
// 2 usage or parse failure
constexpr int kExitAnalysis = 1;
constexpr int kExitUsage = 2;

// Run the pipeline on one model as far as the requested stage.
// Returns the per-model exit code contribution.
int analyze_one(const std::string& label, const std::string& text, const RunConfig& cfg,
                std::ostream& os) {
    RunReport r;
    r.model = label;
    int code = 0;
    try {
        r.m = parse_model(text);
    } catch (const Error& e) {
        std::cerr << label << ": " << e.what() << "\n";
        return kExitUsage;
    }
    if (cfg.max_order > 0) r.m.max_chain_order = cfg.max_order;
    if (cfg.degree_cap > 0) r.m.degree_cap = cfg.degree_cap;
    try {
        r.la = analyze_lagrangian(r.m, r.m.degree_cap);
        if (cfg.stage != Stage::lagrangian) {
            r.can = analyze_canonical(r.m, *r.la, r.m.degree_cap);
            if (cfg.stage != Stage::canonical) {
                r.with_brackets = true;
                BracketContext ctx = make_bracket_context(r.m, r.la->M, r.can->Uhat);
                try {
                    r.class_ia =
                        is_class_IA(ctx, r.can->all_constraints(), r.m.degree_cap)
                            .class_ia;
                } catch (const Error&) {
                }
                if (cfg.stage != Stage::brackets) {
                    if (!r.can->second_class.empty()) {
                        r.skip_reason = "second-class constraints present";
                        code = kExitAnalysis;
                    } else {
                        DtrGenerator dtr = build_dtr(r.m, *r.can);
                        r.conjecture =
                            petr_check(dtr, r.m, *r.la, *r.can, ctx, r.m.degree_cap);
                        if (r.conjecture->verdict == Verdict::INCONCLUSIVE)
                            code = kExitAnalysis;
                    }
                }
            }
        }
    } catch (const Error& e) {
        std::cerr << label << ": " << e.what() << "\n";
        code = kExitAnalysis;
    }
    os << (cfg.json ? emit_json(r) : render_text(r));
    return code;
}

int run(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> inputs;  // label, path
    if (cfg.corpus) {
        for (const char* name :
             {"relparticle_massive", "bilocal", "cawley", "frenkel", "secondclass"})
            inputs.push_back(
                {name, std::string(DIRAC_MODELS_DIR) + "/" + name + ".model"});
    }
    for (auto& f : cfg.files)
        inputs.push_back({std::filesystem::path(f).stem().string(), f});

    int code = 0;
    bool first = true;
    for (auto& [label, path] : inputs) {
        std::ifstream in(path);
        if (!in) {
            std::cerr << "cannot open " << path << "\n";
            return kExitUsage;
        }
        std::ostringstream text;
        text << in.rdbuf();
        if (!cfg.out_dir.empty()) {
            std::filesystem::create_directories(cfg.out_dir);
            std::string ext = cfg.json ? ".json" : ".txt";
            std::ofstream out(std::filesystem::path(cfg.out_dir) / (label + ext));
            code = std::max(code, analyze_one(label, text.str(), cfg, out));
        } else {
            if (!first && !cfg.json) std::cout << "\n";
            code = std::max(code, analyze_one(label, text.str(), cfg, std::cout));
        }
        first = false;
    }
    return code;
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Constraint analysis of finite-dimensional gauge Lagrangians"};
    app.add_option("files", cfg.files, "model files to analyze");
    app.add_flag("--corpus", cfg.corpus, "run the bundled example models");
    app.add_flag("--json", cfg.json, "emit machine-readable JSON");
    std::map<std::string, Stage> stages{{"lagrangian", Stage::lagrangian},
                                        {"canonical", Stage::canonical},
                                        {"brackets", Stage::brackets},
                                        {"conjecture", Stage::conjecture},
                                        {"all", Stage::all}};
    app.add_option("--stage", cfg.stage, "stop after this pipeline stage")
        ->transform(CLI::CheckedTransformer(stages, CLI::ignore_case));
    app.add_option("--max-order", cfg.max_order, "secondary chain length limit");
    app.add_option("--degree-cap", cfg.degree_cap, "polynomial degree cap");
    app.add_option("--out", cfg.out_dir, "write one report file per model here");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }
    if (cfg.files.empty() && !cfg.corpus) {
        std::cerr << app.help();
        return kExitUsage;
    }
    return run(cfg);
}
