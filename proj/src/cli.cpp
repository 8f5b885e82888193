#include "kgquiz/cli.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "kgquiz/corpus_miner.hpp"
#include "kgquiz/difficulty_model.hpp"
#include "kgquiz/error.hpp"
#include "kgquiz/eval_harness.hpp"
#include "kgquiz/kg_store.hpp"
#include "kgquiz/mcq.hpp"
#include "kgquiz/question_gen.hpp"
#include "kgquiz/records.hpp"
#include "kgquiz/stats_features.hpp"
#include "kgquiz/text.hpp"
#include "kgquiz/verbalizer.hpp"

namespace kgq::cli {
namespace fs = std::filesystem;

namespace {

// Lexicon directory layout produced by the mine-* subcommands.
constexpr const char* kSurfaceFile = "surface.tsv";
constexpr const char* kPredLexFile = "pred_lex.tsv";
constexpr const char* kTypeLexFile = "type_lex.tsv";
constexpr const char* kTypeSalienceFile = "type_salience.tsv";
constexpr const char* kLinksFile = "links.tsv";
constexpr const char* kStopwordsFile = "stopwords.txt";

struct Options {
  std::uint64_t seed = 42;
  CoarseRoots roots;

  std::string kg, corpus, type_lex, links, data, topic, model, lexicons, questions, stopwords;
  std::string out, features_out;
  std::string groups = "SAL,COH,TYPE";
  std::size_t max_gap = 6;
  TrainConfig train;
  GenConfig gen;
  std::size_t n = 1;
  std::size_t alpha = kDefaultAlpha;
  std::size_t choices = 3;
  std::string target = "hard";
  std::size_t k = 10;
  std::string a, b, counts, input;
};

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    text::write_file_atomic(path, content);
  }
}

void require_file(const fs::path& p) {
  if (!fs::is_regular_file(p)) fail(ErrorKind::IoError, "missing input file " + p.string());
}

std::vector<double> read_numbers(const std::string& path) {
  std::vector<double> v;
  text::for_each_line(path, [&](std::string_view line, std::size_t line_no) {
    auto t = text::trim(line);
    if (t.empty() || t.front() == '#') return;
    try {
      v.push_back(std::stod(std::string(t)));
    } catch (const std::exception&) {
      fail(ErrorKind::MalformedLine, path + " line " + std::to_string(line_no) + ": not a number");
    }
  });
  return v;
}

std::vector<std::string> read_labels(const std::string& path) {
  std::vector<std::string> v;
  text::for_each_line(path, [&](std::string_view line, std::size_t) {
    auto t = text::trim(line);
    if (!t.empty() && t.front() != '#') v.emplace_back(t);
  });
  return v;
}

std::vector<LabeledVector> full_feature_rows(const Options& o, const KnowledgeGraph& kg,
                                             const SalienceTable& sal, const LinkGraph& links) {
  const FeatureContext ctx{kg, sal, links, o.roots};
  std::vector<LabeledVector> rows;
  for (const auto& li : load_training_data(o.data)) {
    rows.push_back({extract_all_features(li.instance, ctx), li.label});
  }
  return rows;
}

// Everything generate/mcq need, loaded from the lexicon directory.
struct Pipeline {
  KnowledgeGraph kg;
  LinkGraph links;
  SalienceTable salience;
  VerbalizationBundle bundle;
  TypeSalienceTable type_salience;
  DifficultyModel model;
  Stopwords stopwords;
};

Pipeline load_pipeline(const Options& o) {
  const fs::path dir = o.lexicons;
  const fs::path links = o.links.empty() ? dir / kLinksFile : fs::path(o.links);
  const fs::path stop = o.stopwords.empty() ? dir / kStopwordsFile : fs::path(o.stopwords);
  for (const char* f : {kSurfaceFile, kPredLexFile, kTypeLexFile, kTypeSalienceFile}) {
    require_file(dir / f);
  }
  require_file(links);
  if (!o.stopwords.empty()) require_file(stop);

  Pipeline p{KnowledgeGraph::load(o.kg), LinkGraph::load(links), {}, {}, {}, {}, {}};
  p.salience = build_salience(p.links);
  p.bundle.entity_lex = EntityLexicon::load(dir / kSurfaceFile);
  p.bundle.pred_lex = PredicateLexicon::load(dir / kPredLexFile);
  p.bundle.type_lex = TypeLexicon::load(dir / kTypeLexFile, p.kg);
  p.type_salience = TypeSalienceTable::load(dir / kTypeSalienceFile);
  p.model = DifficultyModel::load(o.model);
  p.stopwords = fs::is_regular_file(stop) ? load_stopwords(stop) : default_stopwords();
  return p;
}

// ---------------------------------------------------------------------------
// Subcommands

void cmd_mine_types(const Options& o, std::ostream& out) {
  const auto kg = KnowledgeGraph::load(o.kg);
  const auto lex = TypeLexicon::load(o.type_lex, kg);
  emit(o.out, mine_type_salience(load_corpus(o.corpus), kg, lex).to_tsv(), out);
}

void cmd_mine_predicates(const Options& o, std::ostream& out) {
  const auto kg = KnowledgeGraph::load(o.kg);
  emit(o.out, mine_predicate_phrases(load_corpus(o.corpus), kg, o.max_gap).to_tsv(), out);
}

void cmd_mine_surface(const Options& o, std::ostream& out) {
  emit(o.out, mine_surface_forms(load_corpus(o.corpus)).to_tsv(), out);
}

void cmd_salience(const Options& o, std::ostream& out) {
  const auto links = LinkGraph::load(o.links);
  const auto sal = build_salience(links);
  emit(o.out, sal.to_tsv(), out);
  if (o.features_out.empty()) return;
  if (o.kg.empty() || o.data.empty()) {
    fail(ErrorKind::InvalidArgument, "--features-out requires --kg and --data");
  }
  const auto kg = KnowledgeGraph::load(o.kg);
  const auto groups = FeatureGroups::parse(o.groups);
  std::ostringstream dump;
  dump << "label";
  for (const auto& name : feature_slot_names(groups)) dump << '\t' << name;
  dump << '\n';
  for (const auto& row : full_feature_rows(o, kg, sal, links)) {
    dump << to_string(row.label);
    for (double v : project_features(row.features, groups)) dump << '\t' << text::format_double(v);
    dump << '\n';
  }
  text::write_file_atomic(o.features_out, dump.str());
}

void cmd_train(const Options& o, std::ostream& out) {
  const auto kg = KnowledgeGraph::load(o.kg);
  const auto links = LinkGraph::load(o.links);
  const auto sal = build_salience(links);
  const auto groups = FeatureGroups::parse(o.groups);
  std::vector<LabeledVector> rows;
  for (auto& row : full_feature_rows(o, kg, sal, links)) {
    rows.push_back({project_features(row.features, groups), row.label});
  }
  TrainConfig cfg = o.train;
  cfg.seed = o.seed;
  emit(o.out, train(rows, cfg, groups).to_json(), out);
}

void cmd_generate(const Options& o, std::ostream& out) {
  const Pipeline p = load_pipeline(o);
  const Topic topic = load_topic(o.topic, p.kg);
  const GenerationResources res{p.kg, p.bundle, p.type_salience, p.model,
                                FeatureContext{p.kg, p.salience, p.links, o.roots}, p.stopwords};
  GenConfig cfg = o.gen;
  cfg.seed = o.seed;
  Rng rng(o.seed);
  std::string lines;
  for (std::size_t i = 0; i < o.n; ++i) {
    lines += question_record(generate_query(topic, res, cfg, rng), o.seed) + "\n";
  }
  emit(o.out, lines, out);
}

void cmd_mcq(const Options& o, std::ostream& out, std::ostream& err) {
  require_file(o.questions);
  const Pipeline p = load_pipeline(o);
  const FeatureContext ctx{p.kg, p.salience, p.links, o.roots};
  const McqConfig cfg{o.choices, parse_difficulty(o.target), o.alpha};
  Rng rng(o.seed);
  std::string lines;
  std::size_t skipped = 0;
  text::for_each_line(o.questions, [&](std::string_view line, std::size_t line_no) {
    if (text::trim(line).empty()) return;
    const GeneratedQuestion q = parse_question_record(line);
    try {
      lines += mcq_record(build_mcq(q, p.kg, p.model, ctx, cfg, rng), o.seed) + "\n";
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoCandidates && e.kind() != ErrorKind::InsufficientCandidates) throw;
      ++skipped;
      err << "skipping question on line " << line_no << ": " << to_string(e.kind()) << ": "
          << e.what() << '\n';
    }
  });
  emit(o.out, lines, out);
  if (skipped > 0) err << skipped << " question(s) had too few distractor candidates\n";
}

void cmd_eval_cv(const Options& o, std::ostream& out) {
  const auto kg = KnowledgeGraph::load(o.kg);
  const auto links = LinkGraph::load(o.links);
  const auto rows = full_feature_rows(o, kg, build_salience(links), links);
  TrainConfig cfg = o.train;
  cfg.seed = o.seed;
  const auto res = kfold_cv(rows, o.k, o.seed, FeatureGroups::parse(o.groups), cfg);
  std::ostringstream s;
  s << "fold\taccuracy\n";
  for (std::size_t f = 0; f < res.fold_accuracy.size(); ++f) {
    s << f << '\t' << text::format_double(res.fold_accuracy[f]) << '\n';
  }
  s << "mean\t" << text::format_double(res.mean_accuracy) << '\n';
  emit(o.out, s.str(), out);
}

void cmd_eval_ablation(const Options& o, std::ostream& out) {
  const auto kg = KnowledgeGraph::load(o.kg);
  const auto links = LinkGraph::load(o.links);
  const auto rows = full_feature_rows(o, kg, build_salience(links), links);
  TrainConfig cfg = o.train;
  cfg.seed = o.seed;
  emit(o.out, ablation_tsv(ablation(rows, o.k, o.seed, cfg)), out);
}

void cmd_eval_kendall(const Options& o, std::ostream& out) {
  const auto a = read_numbers(o.a);
  const auto b = read_numbers(o.b);
  emit(o.out, "tau_b\t" + text::format_double(kendall_tau(a, b)) + "\n", out);
}

void cmd_eval_weighted_mean(const Options& o, std::ostream& out) {
  std::vector<double> values;
  std::vector<double> weights;
  text::for_each_line(o.input, [&](std::string_view line, std::size_t line_no) {
    if (text::trim(line).empty() || line.front() == '#') return;
    auto cols = text::split(line, '\t');
    try {
      if (cols.size() != 2) throw std::invalid_argument("columns");
      values.push_back(std::stod(std::string(cols[0])));
      weights.push_back(std::stod(std::string(cols[1])));
    } catch (const std::exception&) {
      fail(ErrorKind::MalformedLine, "line " + std::to_string(line_no) + ": expected value<TAB>weight");
    }
  });
  emit(o.out, "weighted_mean\t" + text::format_double(weighted_mean(values, weights)) + "\n", out);
}

void cmd_eval_fleiss(const Options& o, std::ostream& out) {
  std::vector<std::vector<std::size_t>> counts;
  text::for_each_line(o.counts, [&](std::string_view line, std::size_t line_no) {
    if (text::trim(line).empty() || line.front() == '#') return;
    std::vector<std::size_t> row;
    for (auto cell : text::split(line, '\t')) {
      try {
        row.push_back(std::stoul(std::string(text::trim(cell))));
      } catch (const std::exception&) {
        fail(ErrorKind::MalformedLine, "line " + std::to_string(line_no) + ": bad count");
      }
    }
    counts.push_back(std::move(row));
  });
  emit(o.out, "fleiss_kappa\t" + text::format_double(fleiss_kappa(counts)) + "\n", out);
}

void cmd_eval_cohen(const Options& o, std::ostream& out) {
  const auto a = read_labels(o.a);
  const auto b = read_labels(o.b);
  emit(o.out, "cohen_kappa\t" + text::format_double(cohen_kappa(a, b)) + "\n", out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Knowledge-graph quiz question generation toolkit", "kgquiz"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--seed", o.seed, "Seed for every stochastic choice")->capture_default_str();
  app.add_option("--person-root", o.roots.person, "Type id of the person coarse root")->capture_default_str();
  app.add_option("--location-root", o.roots.location, "Type id of the location coarse root")->capture_default_str();
  app.add_option("--org-root", o.roots.organization, "Type id of the organization coarse root")->capture_default_str();

  auto existing = [](CLI::App* sub, const std::string& flag, std::string& target, const std::string& help) {
    return sub->add_option(flag, target, help)->check(CLI::ExistingFile);
  };

  auto* mine_types = app.add_subcommand("mine-types", "Mine type salience s(t,e) from Hearst patterns");
  existing(mine_types, "--kg", o.kg, "Knowledge graph TSV")->required();
  existing(mine_types, "--corpus", o.corpus, "Entity-annotated corpus")->required();
  existing(mine_types, "--type-lex", o.type_lex, "lemma<TAB>TypeId lexicon")->required();
  mine_types->add_option("--out", o.out, "Output type_salience.tsv (default stdout)");

  auto* mine_preds = app.add_subcommand("mine-predicates", "Mine predicate paraphrases scored by npmi");
  existing(mine_preds, "--kg", o.kg, "Knowledge graph TSV")->required();
  existing(mine_preds, "--corpus", o.corpus, "Entity-annotated corpus")->required();
  mine_preds->add_option("--max-gap", o.max_gap, "Maximum words between two mentions")
      ->capture_default_str()->check(CLI::PositiveNumber);
  mine_preds->add_option("--out", o.out, "Output pred_lex.tsv (default stdout)");

  auto* mine_surface = app.add_subcommand("mine-surface", "Collect entity surface forms with counts");
  existing(mine_surface, "--corpus", o.corpus, "Entity-annotated corpus")->required();
  mine_surface->add_option("--out", o.out, "Output surface.tsv (default stdout)");

  auto* salience = app.add_subcommand("salience", "Entity salience from a link graph; optional feature dump");
  existing(salience, "--links", o.links, "source<TAB>target link graph")->required();
  salience->add_option("--out", o.out, "Output entity<TAB>phi (default stdout)");
  existing(salience, "--kg", o.kg, "Knowledge graph TSV (for --features-out)");
  existing(salience, "--data", o.data, "label<TAB>answer<TAB>q1,q2 rows (for --features-out)");
  salience->add_option("--features-out", o.features_out, "Write a feature TSV for --data");
  salience->add_option("--groups", o.groups, "Feature groups, e.g. SAL,COH,TYPE")->capture_default_str();

  auto add_train_opts = [&](CLI::App* sub) {
    sub->add_option("--learning-rate", o.train.learning_rate)->capture_default_str();
    sub->add_option("--epochs", o.train.epochs)->capture_default_str();
    sub->add_option("--l2", o.train.l2)->capture_default_str();
    sub->add_option("--tolerance", o.train.tolerance)->capture_default_str();
  };

  auto* train_cmd = app.add_subcommand("train", "Train the difficulty classifier");
  existing(train_cmd, "--kg", o.kg, "Knowledge graph TSV")->required();
  existing(train_cmd, "--links", o.links, "Link graph TSV")->required();
  existing(train_cmd, "--data", o.data, "label<TAB>answer<TAB>q1,q2 rows")->required();
  train_cmd->add_option("--groups", o.groups, "Feature groups")->capture_default_str();
  train_cmd->add_option("--out", o.out, "Output model JSON (default stdout)");
  add_train_opts(train_cmd);

  auto add_pipeline_opts = [&](CLI::App* sub) {
    existing(sub, "--kg", o.kg, "Knowledge graph TSV")->required();
    existing(sub, "--model", o.model, "Model JSON from `train`")->required();
    sub->add_option("--lexicons", o.lexicons, "Directory with surface.tsv, pred_lex.tsv, type_lex.tsv, type_salience.tsv")
        ->required()->check(CLI::ExistingDirectory);
    existing(sub, "--links", o.links, "Link graph TSV (default <lexicons>/links.tsv)");
    existing(sub, "--stopwords", o.stopwords, "Stopword list (default <lexicons>/stopwords.txt or built-in)");
    sub->add_option("--out", o.out, "Output JSON lines (default stdout)");
  };

  auto* generate = app.add_subcommand("generate", "Generate unique-answer questions for a topic");
  add_pipeline_opts(generate);
  existing(generate, "--topic", o.topic, "Topic file, one entity per line")->required();
  generate->add_option("--n", o.n, "Number of questions")->capture_default_str()->check(CLI::PositiveNumber);
  generate->add_option("--max-instance-patterns", o.gen.max_instance_patterns)->capture_default_str();
  generate->add_option("--entity-retries", o.gen.entity_retries)->capture_default_str();
  generate->add_option("--subset-attempts", o.gen.subset_attempts)->capture_default_str();

  auto* mcq = app.add_subcommand("mcq", "Turn generated questions into multiple-choice questions");
  add_pipeline_opts(mcq);
  existing(mcq, "--questions", o.questions, "JSON lines from `generate`")->required();
  mcq->add_option("--alpha", o.alpha, "Maximum relaxation distance")->capture_default_str();
  mcq->add_option("--choices", o.choices, "Answer choices per question")->capture_default_str();
  mcq->add_option("--target", o.target, "Distractor difficulty target")
      ->capture_default_str()->check(CLI::IsMember({"easy", "hard"}));

  auto* eval = app.add_subcommand("eval", "Evaluation tables and agreement statistics");
  eval->require_subcommand(1);
  auto add_data_opts = [&](CLI::App* sub) {
    existing(sub, "--kg", o.kg, "Knowledge graph TSV")->required();
    existing(sub, "--links", o.links, "Link graph TSV")->required();
    existing(sub, "--data", o.data, "label<TAB>answer<TAB>q1,q2 rows")->required();
    sub->add_option("--k", o.k, "Number of folds")->capture_default_str();
    sub->add_option("--out", o.out, "Output TSV (default stdout)");
    add_train_opts(sub);
  };
  auto* eval_cv = eval->add_subcommand("cv", "k-fold cross-validated accuracy");
  add_data_opts(eval_cv);
  eval_cv->add_option("--groups", o.groups, "Feature groups")->capture_default_str();
  auto* eval_ablation = eval->add_subcommand("ablation", "Accuracy for every feature-group subset");
  add_data_opts(eval_ablation);
  auto* eval_kendall = eval->add_subcommand("kendall", "Kendall's tau-b between two score lists");
  existing(eval_kendall, "--a", o.a, "One score per line")->required();
  existing(eval_kendall, "--b", o.b, "One score per line")->required();
  eval_kendall->add_option("--out", o.out, "Output TSV (default stdout)");
  auto* eval_wmean = eval->add_subcommand("weighted-mean", "Weighted mean of value<TAB>weight rows");
  existing(eval_wmean, "--input", o.input, "value<TAB>weight per line")->required();
  eval_wmean->add_option("--out", o.out, "Output TSV (default stdout)");
  auto* eval_fleiss = eval->add_subcommand("fleiss", "Fleiss' kappa of an items x categories count matrix");
  existing(eval_fleiss, "--counts", o.counts, "Tab-separated counts, one item per line")->required();
  eval_fleiss->add_option("--out", o.out, "Output TSV (default stdout)");
  auto* eval_cohen = eval->add_subcommand("cohen", "Cohen's kappa of two label lists");
  existing(eval_cohen, "--a", o.a, "One label per line")->required();
  existing(eval_cohen, "--b", o.b, "One label per line")->required();
  eval_cohen->add_option("--out", o.out, "Output TSV (default stdout)");

  std::vector<const char*> argv{"kgquiz"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (mine_types->parsed()) cmd_mine_types(o, out);
    else if (mine_preds->parsed()) cmd_mine_predicates(o, out);
    else if (mine_surface->parsed()) cmd_mine_surface(o, out);
    else if (salience->parsed()) cmd_salience(o, out);
    else if (train_cmd->parsed()) cmd_train(o, out);
    else if (generate->parsed()) cmd_generate(o, out);
    else if (mcq->parsed()) cmd_mcq(o, out, err);
    else if (eval_cv->parsed()) cmd_eval_cv(o, out);
    else if (eval_ablation->parsed()) cmd_eval_ablation(o, out);
    else if (eval_kendall->parsed()) cmd_eval_kendall(o, out);
    else if (eval_wmean->parsed()) cmd_eval_weighted_mean(o, out);
    else if (eval_fleiss->parsed()) cmd_eval_fleiss(o, out);
    else if (eval_cohen->parsed()) cmd_eval_cohen(o, out);
  } catch (const Error& e) {
    err << to_string(e.kind()) << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace kgq::cli
