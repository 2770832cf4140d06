// zonerec command-line driver.
//
//   zonerec gen-synthetic --out DIR [--zone-count N --per-zone N --noise R --seed S]
//   zonerec ingest    --corpus raw.jsonl --zones zones.geojson --out clean.jsonl
//   zonerec train     --corpus C --algo rf --out model.json
//   zonerec evaluate  --corpus C --algo rf --folds 10 --out report.json
//   zonerec compare   --corpus C --out comparison.json
//   zonerec ablate    --corpus C --out ablation.json
//   zonerec recommend --model M --zones Z --description "..."
//   zonerec serve     --model M --zones Z --bind 127.0.0.1 --port 8080
//
// Every flag can also come from ZONEREC_<FLAG> (upper case, '-' as '_').
// Failures print one JSON line on stderr and exit 1.

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "zonerec/http_server.hpp"
#include "zonerec/zonerec.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace zonerec;

namespace {

struct Settings {
  std::string corpus;
  std::string zones;
  std::string model;
  std::string out;
  std::string algo = "rf";
  double c = 1.0;
  double gamma = 0.0;
  std::size_t trees = 100;
  std::size_t epochs = 15;
  double tol = 1e-3;
  std::size_t folds = 10;
  std::size_t k = kDefaultTopK;
  std::string mask = "1,1,1";
  std::uint64_t seed = 1;
  std::size_t min_df = 3;
  std::size_t max_terms = 5000;

  SyntheticConfig synthetic;

  std::string name;
  std::string description;
  std::vector<std::string> categories;

  std::string bind = "127.0.0.1";
  int port = 8080;
  std::string cors_origin;
  std::string trained_at;
};

std::string env_name(const std::string& flag) {
  std::string s = "ZONEREC_";
  for (char ch : flag) s += ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

template <typename T>
CLI::Option* flag(CLI::App* app, const std::string& name, T& target, const std::string& help) {
  return app->add_option("--" + name, target, help)->envname(env_name(name))->capture_default_str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << content;
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

void require(const std::string& value, const std::string& flag_name) {
  if (value.empty()) throw ConfigError("--" + flag_name + " is required");
}

ModelConfig model_config(const Settings& s) {
  ModelConfig cfg;
  cfg.kind = parse_model_kind(s.algo);
  cfg.c = s.c;
  cfg.gamma = s.gamma;
  cfg.trees = s.trees;
  cfg.epochs = s.epochs;
  cfg.tol = s.tol;
  cfg.seed = s.seed;
  cfg.validate();
  return cfg;
}

CvOptions cv_options(const Settings& s) {
  if (s.folds < 2) throw ConfigError("folds must be >= 2");
  if (s.k < 1) throw ConfigError("k must be >= 1");
  CvOptions o;
  o.folds = s.folds;
  o.seed = s.seed;
  o.k = s.k;
  o.vocabulary.min_df = s.min_df;
  o.vocabulary.max_terms = s.max_terms;
  return o;
}

// Accepts a clean corpus, or a raw profile file when --zones is given.
CleanCorpus load_corpus(const Settings& s) {
  require(s.corpus, "corpus");
  const std::string text = read_file(s.corpus);
  const std::string first = text.substr(0, text.find('\n'));
  bool clean = false;
  try {
    clean = json::parse(first).value("format", "") == kCleanCorpusFormat;
  } catch (const json::exception&) {
  }
  std::istringstream in(text);
  if (clean) return read_clean_corpus(in);
  if (s.zones.empty()) throw ConfigError("--corpus is not a clean corpus; pass --zones to ingest it");
  const ZoneSet zones = load_zones(read_file(s.zones));
  FilterResult fr = filter_and_label(read_profiles(in), zones);
  CleanCorpus corpus;
  corpus.zone_count = zones.count();
  corpus.profiles = std::move(fr.profiles);
  corpus.meta = {{"source_hash", fingerprint(text)}, {"drops", fr.drops.to_json()}};
  return corpus;
}

std::string corpus_hash(const CleanCorpus& c) {
  std::ostringstream ss;
  write_clean_corpus(ss, c);
  return fingerprint(ss.str());
}

std::string timestamp(const Settings& s) {
  if (!s.trained_at.empty()) return s.trained_at;
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::stoll(epoch));
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// JSON to --out, table to stdout and to a .txt sidecar.
void emit_report(const Settings& s, json report, const CleanCorpus& corpus, const std::string& table) {
  report["corpus_hash"] = corpus_hash(corpus);
  report["corpus_profiles"] = corpus.profiles.size();
  std::cout << table;
  if (s.out.empty()) return;
  write_file(s.out, report.dump(2) + "\n");
  fs::path txt(s.out);
  txt.replace_extension(".txt");
  write_file(txt.string(), table);
}

void cmd_gen_synthetic(const Settings& s) {
  require(s.out, "out");
  SyntheticConfig cfg = s.synthetic;
  cfg.seed = s.seed;
  const SyntheticCorpus syn = generate_synthetic(cfg);
  const fs::path dir(s.out);
  std::ostringstream profiles;
  write_profiles(profiles, syn.profiles);
  write_file((dir / "corpus.jsonl").string(), profiles.str());
  json zones = syn.zones.to_geojson();
  zones["generator"] = cfg.to_json();
  write_file((dir / "zones.geojson").string(), zones.dump() + "\n");
  const json manifest = {{"generator", cfg.to_json()},
                         {"profiles", syn.profiles.size()},
                         {"zones", syn.zones.count()},
                         {"corpus_hash", fingerprint(profiles.str())}};
  write_file((dir / "synthetic.json").string(), manifest.dump(2) + "\n");
  std::cout << manifest.dump() << '\n';
}

void cmd_ingest(const Settings& s) {
  require(s.zones, "zones");
  require(s.out, "out");
  const CleanCorpus corpus = load_corpus(s);
  std::ostringstream out;
  write_clean_corpus(out, corpus);
  write_file(s.out, out.str());
  const json summary = {{"profiles", corpus.profiles.size()},
                        {"zone_count", corpus.zone_count},
                        {"drops", corpus.meta.at("drops")}};
  fs::path drops(s.out);
  drops.replace_extension(".drops.json");
  write_file(drops.string(), summary.dump(2) + "\n");
  std::cout << summary.dump() << '\n';
}

void cmd_train(const Settings& s) {
  require(s.out, "out");
  const CleanCorpus corpus = load_corpus(s);
  const ModelConfig cfg = model_config(s);
  const FeatureGroupMask mask = FeatureGroupMask::parse(s.mask);
  VocabularyOptions vo;
  vo.min_df = s.min_df;
  vo.max_terms = s.max_terms;
  const json meta = {{"trained_at", timestamp(s)},
                     {"corpus_hash", corpus_hash(corpus)},
                     {"profiles", corpus.profiles.size()},
                     {"mask", mask.to_json()},
                     {"seed", s.seed}};
  const ModelBundle bundle = train_bundle(corpus.profiles, corpus.zone_count, cfg, mask, vo, meta);
  write_file(s.out, bundle.to_json().dump() + "\n");
  std::cout << json{{"model", s.out},
                    {"kind", to_string(cfg.kind)},
                    {"vocabulary_size", bundle.vocabulary.size()},
                    {"profiles", corpus.profiles.size()}}
                   .dump()
            << '\n';
}

void cmd_evaluate(const Settings& s) {
  const CleanCorpus corpus = load_corpus(s);
  const EvaluationReport r =
      evaluate(corpus.profiles, corpus.zone_count, model_config(s), FeatureGroupMask::parse(s.mask), cv_options(s));
  emit_report(s, r.to_json(), corpus, format_evaluation(r));
}

void cmd_compare(const Settings& s) {
  const CleanCorpus corpus = load_corpus(s);
  auto configs = default_comparison_configs(s.trees, s.seed);
  for (auto& c : configs) {
    if (c.kind != ModelKind::kRandomForest) {
      c.c = s.c;
      c.gamma = s.gamma;
      c.epochs = s.epochs;
      c.tol = s.tol;
    }
  }
  const ComparisonReport r =
      compare_models(corpus.profiles, corpus.zone_count, configs, FeatureGroupMask::parse(s.mask), cv_options(s));
  emit_report(s, r.to_json(), corpus, format_comparison(r));
}

void cmd_ablate(const Settings& s) {
  const CleanCorpus corpus = load_corpus(s);
  const AblationReport r = ablation(corpus.profiles, corpus.zone_count, model_config(s), cv_options(s));
  emit_report(s, r.to_json(), corpus, format_ablation(r));
}

RecommendService load_service(const Settings& s) {
  require(s.model, "model");
  require(s.zones, "zones");
  ModelBundle bundle;
  try {
    bundle = ModelBundle::from_json(json::parse(read_file(s.model)));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model file: ") + e.what());
  }
  return RecommendService(std::move(bundle), load_zones(read_file(s.zones)));
}

void cmd_recommend(const Settings& s, bool k_given) {
  const RecommendService service = load_service(s);
  RecommendRequest req;
  req.name = s.name;
  req.description = s.description;
  req.categories = s.categories;
  if (k_given) req.k = static_cast<long long>(s.k);
  if (count_words(req.description) == 0) throw ValidationError("--description must not be empty");
  std::cout << service.recommend(req).to_json().dump(2) << '\n';
}

void cmd_serve(const Settings& s) {
  const RecommendService service = load_service(s);
  httplib::Server server;
  ServerOptions opts{s.bind, s.port, s.cors_origin};
  install_routes(server, service, opts);
  std::cerr << json{{"event", "listening"}, {"bind", s.bind}, {"port", s.port}}.dump() << std::endl;
  if (!server.listen(s.bind, s.port)) throw ConfigError("cannot listen on " + s.bind + ":" + std::to_string(s.port));
}

int fail(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << std::endl;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  Settings s;
  CLI::App app{"Zone recommendation from business descriptions"};
  app.require_subcommand(1);

  auto add_corpus = [&](CLI::App* c) {
    flag(c, "corpus", s.corpus, "Clean corpus, or raw profiles JSONL together with --zones");
    flag(c, "zones", s.zones, "Zone boundaries (GeoJSON)");
  };
  auto add_model_flags = [&](CLI::App* c) {
    flag(c, "algo", s.algo, "svm-linear | svm-rbf | rf")->check(CLI::IsMember({"svm-linear", "svm-rbf", "rf"}));
    flag(c, "c", s.c, "SVM cost");
    flag(c, "gamma", s.gamma, "RBF gamma (0 means 1/#features)");
    flag(c, "trees", s.trees, "Random forest size");
    flag(c, "epochs", s.epochs, "Linear SVM epochs");
    flag(c, "tol", s.tol, "SMO KKT tolerance");
    flag(c, "seed", s.seed, "Random seed");
    flag(c, "min-df", s.min_df, "Minimum document frequency");
    flag(c, "max-terms", s.max_terms, "Vocabulary size cap");
  };
  auto add_cv_flags = [&](CLI::App* c) {
    flag(c, "folds", s.folds, "Cross-validation folds");
    flag(c, "k", s.k, "Cutoff for Hit/MAP/NDCG");
    flag(c, "out", s.out, "Report path (JSON); a .txt table is written beside it");
  };

  auto* gen = app.add_subcommand("gen-synthetic", "Write a synthetic corpus and grid zones");
  flag(gen, "out", s.out, "Output directory")->required();
  flag(gen, "zone-count", s.synthetic.zone_count, "Number of zones");
  flag(gen, "per-zone", s.synthetic.profiles_per_zone, "Profiles per zone");
  flag(gen, "vocab-per-zone", s.synthetic.vocab_per_zone, "Signal words per zone");
  flag(gen, "noise", s.synthetic.noise_ratio, "Share of description words drawn from the shared pool");
  flag(gen, "noise-vocab", s.synthetic.noise_vocab, "Size of the shared noise pool");
  flag(gen, "name-vocab", s.synthetic.name_vocab, "Size of the business-name pool");
  flag(gen, "zipf", s.synthetic.zipf_exponent, "Zipf exponent for word draws (0 = uniform)");
  flag(gen, "seed", s.seed, "Random seed");

  auto* ingest = app.add_subcommand("ingest", "Filter, label and clean raw profiles");
  add_corpus(ingest);
  flag(ingest, "out", s.out, "Clean corpus path");

  auto* train = app.add_subcommand("train", "Train a model on the whole corpus");
  add_corpus(train);
  add_model_flags(train);
  flag(train, "mask", s.mask, "Feature groups as name,desc,cat booleans");
  flag(train, "out", s.out, "Model path");
  flag(train, "trained-at", s.trained_at, "Timestamp recorded in the model (default: SOURCE_DATE_EPOCH or now)");

  auto* eval = app.add_subcommand("evaluate", "Cross-validate one model against the random baseline");
  add_corpus(eval);
  add_model_flags(eval);
  add_cv_flags(eval);
  flag(eval, "mask", s.mask, "Feature groups as name,desc,cat booleans");

  auto* compare = app.add_subcommand("compare", "Cross-validate SVM-Linear, SVM-RBF and random forest");
  add_corpus(compare);
  add_model_flags(compare);
  add_cv_flags(compare);
  flag(compare, "mask", s.mask, "Feature groups as name,desc,cat booleans");

  auto* ablate = app.add_subcommand("ablate", "Feature-group ablation over six masks");
  add_corpus(ablate);
  add_model_flags(ablate);
  add_cv_flags(ablate);

  auto* rec = app.add_subcommand("recommend", "Rank zones for one business");
  flag(rec, "model", s.model, "Model path");
  flag(rec, "zones", s.zones, "Zone boundaries (GeoJSON)");
  flag(rec, "name", s.name, "Business name");
  flag(rec, "description", s.description, "Business description");
  rec->add_option("--category", s.categories, "Category label (repeatable)");
  auto* rec_k = flag(rec, "k", s.k, "Number of zones to return");

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  flag(serve, "model", s.model, "Model path");
  flag(serve, "zones", s.zones, "Zone boundaries (GeoJSON)");
  flag(serve, "bind", s.bind, "Bind address");
  flag(serve, "port", s.port, "Port");
  flag(serve, "cors-origin", s.cors_origin, "Allowed browser origin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage_error", e.what());
  }

  try {
    if (*gen) cmd_gen_synthetic(s);
    else if (*ingest) cmd_ingest(s);
    else if (*train) cmd_train(s);
    else if (*eval) cmd_evaluate(s);
    else if (*compare) cmd_compare(s);
    else if (*ablate) cmd_ablate(s);
    else if (*rec) cmd_recommend(s, rec_k->count() > 0 || std::getenv("ZONEREC_K") != nullptr);
    else if (*serve) cmd_serve(s);
  } catch (const Error& e) {
    return fail(e.kind(), e.what());
  } catch (const std::exception& e) {
    return fail("internal_error", e.what());
  }
  return 0;
}
