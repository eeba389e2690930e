#include "narrascope/cli/cli.hpp"

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <cstdint>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "narrascope/cooccur/cooccur.hpp"
#include "narrascope/error.hpp"
#include "narrascope/ingest/poller.hpp"
#include "narrascope/ingest/post_store.hpp"
#include "narrascope/ingest/sources.hpp"
#include "narrascope/render/render.hpp"
#include "narrascope/server/api.hpp"
#include "narrascope/session/pipeline.hpp"
#include "narrascope/session/session.hpp"
#include "narrascope/session/snapshot_json.hpp"
#include "narrascope/synth/synth.hpp"

namespace narrascope::cli {
namespace {

namespace fs = std::filesystem;

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted.store(true); }

void install_signal_handlers() {
  g_interrupted.store(false);
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kNotFound, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Terms recorded in an input file's matched_terms, in first-seen order.
std::vector<std::string> terms_from_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kNotFound, "replay input not found: " + path.string());
  std::vector<std::string> terms;
  std::set<std::string> seen;
  for (std::string line; std::getline(in, line);) {
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (!j.is_object() || !j.contains("matched_terms") || !j["matched_terms"].is_array()) continue;
    for (const auto& t : j["matched_terms"]) {
      if (t.is_string() && seen.insert(t.get<std::string>()).second) {
        terms.push_back(t.get<std::string>());
      }
    }
  }
  return terms;
}

std::optional<ingest::Timestamp> optional_timestamp(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return ingest::parse_timestamp(text);
}

struct AnalysisOptions {
  std::size_t k = 10;
  std::size_t dims = 2;
  std::string mode = "singular_vectors";
  std::string tagger = "baseline";
  std::string from;
  std::string to;

  void add_to(CLI::App* app) {
    app->add_option("--top,-k", k, "Top-k nouns and verbs kept for the table")
        ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
    app->add_option("--dims", dims, "Retained dimensions")
        ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
    app->add_option("--mode", mode, "Coordinate mode")
        ->check(CLI::IsMember({"singular_vectors", "principal"}));
    app->add_option("--tagger", tagger,
                    "baseline | subprocess:CMD ARGS | subprocess+baseline:CMD ARGS");
    app->add_option("--from", from, "Window start (inclusive), YYYY-MM-DDTHH:MM:SSZ");
    app->add_option("--to", to, "Window end (exclusive), YYYY-MM-DDTHH:MM:SSZ");
  }

  session::SessionConfig config(const fs::path& store, const std::string& event) const {
    session::SessionConfig cfg;
    cfg.event_name = event;
    cfg.store_path = store;
    cfg.k = k;
    cfg.dims = dims;
    cfg.tagger = tagger;
    cfg.coordinate_mode = *ca::parse_coordinate_mode(mode);
    cfg.window = {optional_timestamp(from), optional_timestamp(to)};
    return cfg;
  }
};

void print_report_json(std::ostream& out, const ingest::CycleReport& r) {
  out << r.to_json().dump() << "\n" << std::flush;
}

int run_replay(const fs::path& in, const fs::path& store_path, std::vector<std::string> terms,
               const std::string& event, std::size_t page_size, std::ostream& out) {
  if (!fs::exists(in)) throw Error(ErrorKind::kNotFound, "replay input not found: " + in.string());
  if (terms.empty()) terms = terms_from_file(in);
  if (terms.empty()) {
    throw Error(ErrorKind::kEmptyTermSet,
                "no --term given and the input records carry no matched_terms");
  }
  ingest::TermsProvider provider(ingest::SearchTermSet::create(event, terms));
  auto store = ingest::PostStore::open(store_path);
  ingest::ReplaySource source(in, page_size);
  ingest::PollerOptions opts;
  opts.interval = std::chrono::milliseconds(0);
  opts.stop_when_exhausted = true;
  ingest::Poller poller(source, provider, store, opts,
                        [&out](const ingest::CycleReport& r) { print_report_json(out, r); });
  poller.start();
  poller.wait();
  if (const auto fatal = poller.fatal_error()) throw Error(ErrorKind::kStorageFailure, *fatal);
  return kExitOk;
}

int run_ingest(const fs::path& config_path, const fs::path& store_path,
               std::optional<double> interval, std::uint64_t cycles, std::ostream& out) {
  const auto cfg = ingest::load_ingest_config(config_path);
  ingest::TermsProvider provider(ingest::SearchTermSet::create(cfg.event_name, cfg.terms));
  auto store = ingest::PostStore::open(store_path);
  ingest::HttpSource source(cfg.live);
  ingest::PollerOptions opts;
  opts.interval = std::chrono::milliseconds(
      static_cast<std::int64_t>(1000.0 * interval.value_or(cfg.live.interval_seconds)));
  opts.max_cycles = cycles;
  ingest::Poller poller(source, provider, store, opts,
                        [&out](const ingest::CycleReport& r) { print_report_json(out, r); });
  install_signal_handlers();
  poller.start();
  std::thread watcher([&] {
    while (!g_interrupted.load() && poller.cycles_run() < (cycles ? cycles : UINT64_MAX)) {
      std::this_thread::sleep_for(std::chrono::milliseconds(200));
    }
    poller.stop();
  });
  poller.wait();
  g_interrupted.store(true);
  watcher.join();
  if (const auto fatal = poller.fatal_error()) throw Error(ErrorKind::kStorageFailure, *fatal);
  return kExitOk;
}

int run_analyze(const fs::path& store, const AnalysisOptions& aopts,
                const std::vector<std::string>& exclusions, const std::string& out_path,
                const std::string& session_dir, const std::string& table_path,
                std::size_t report_rows, std::ostream& out) {
  if (!fs::exists(store)) throw Error(ErrorKind::kNotFound, "store not found: " + store.string());
  const auto cfg = aopts.config(store, "event");
  cfg.validate();
  session::SnapshotPtr snap;
  if (!session_dir.empty()) {
    auto s = session::Session::open(session_dir, cfg);
    snap = s->latest() ? s->exclude_and_rerun(exclusions) : s->run_iteration(exclusions);
  } else {
    const auto annotator = text::make_annotator(cfg.tagger);
    const auto posts = ingest::read_store(store);
    auto result = session::analyze_posts(posts, session::params_of(cfg),
                                         session::normalize_exclusions(exclusions), *annotator);
    result.sequence_number = 1;
    snap = std::make_shared<const session::AnalysisSnapshot>(std::move(result));
  }
  if (!out_path.empty()) session::write_file_atomic(out_path, session::export_snapshot(*snap));
  if (!table_path.empty()) session::write_file_atomic(table_path, cooccur::to_csv(snap->table));
  out << render::render_report(*snap, report_rows);
  return kExitOk;
}

int run_report(const fs::path& snapshot_path, std::size_t top, const std::string& svg,
               std::ostream& out) {
  const auto snap = session::import_snapshot(read_file(snapshot_path));
  out << render::render_report(snap, top);
  if (!svg.empty()) session::write_file_atomic(svg, render::render_biplot(snap));
  return kExitOk;
}

struct ServeOptions {
  std::string store;
  std::string session_dir;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string origin;
  std::vector<std::string> terms;
  std::string event = "event";
  std::string live_config;
  std::string replay_in;
  double replay_interval = 1.0;
};

int run_serve(const ServeOptions& so, const AnalysisOptions& aopts, std::ostream& out) {
  const fs::path session_dir =
      so.session_dir.empty() ? fs::path(so.store + ".session") : fs::path(so.session_dir);
  std::vector<std::string> terms = so.terms;
  std::optional<ingest::IngestConfig> live;
  if (!so.live_config.empty()) {
    live = ingest::load_ingest_config(so.live_config);
    if (terms.empty()) terms = live->terms;
  }
  if (terms.empty() && !so.replay_in.empty()) terms = terms_from_file(so.replay_in);
  const std::string event = live ? live->event_name : so.event;

  auto session = session::Session::open(session_dir, aopts.config(so.store, event), terms);
  server::ApiServer api(*session, {so.host, so.port, so.origin});

  std::unique_ptr<ingest::Source> source;
  std::optional<ingest::PostStore> store;
  std::unique_ptr<ingest::Poller> poller;
  if (live || !so.replay_in.empty()) {
    auto provider = session->terms_provider();
    if (!provider) throw Error(ErrorKind::kEmptyTermSet, "ingestion needs search terms");
    store.emplace(ingest::PostStore::open(so.store));
    ingest::PollerOptions opts;
    if (live) {
      source = std::make_unique<ingest::HttpSource>(live->live);
      opts.interval = std::chrono::milliseconds(
          static_cast<std::int64_t>(1000.0 * live->live.interval_seconds));
    } else {
      source = std::make_unique<ingest::ReplaySource>(so.replay_in, 100);
      opts.interval = std::chrono::milliseconds(static_cast<std::int64_t>(1000.0 * so.replay_interval));
      opts.stop_when_exhausted = true;
    }
    poller = std::make_unique<ingest::Poller>(
        *source, *provider, *store, opts,
        [&api](const ingest::CycleReport& r) { api.publish_cycle(r); });
  }

  install_signal_handlers();
  const int port = api.start();
  out << "serving on http://" << so.host << ":" << port << "/api/v1\n" << std::flush;
  if (poller) poller->start();
  while (!g_interrupted.load()) std::this_thread::sleep_for(std::chrono::milliseconds(200));
  if (poller) poller->stop();
  api.stop();
  return kExitOk;
}

int run_synth(const fs::path& scenario, const fs::path& out_path, std::ostream& out) {
  const auto spec = synth::load_scenario(scenario);
  const auto posts = synth::generate(spec);
  synth::write_posts(out_path, posts, spec);
  out << "wrote " << posts.size() << " posts to " << out_path.string() << "\n";
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Narrative detection over social media posts", "narrascope"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Poll a live source into a store");
  std::string ingest_config, ingest_store;
  std::optional<double> ingest_interval;
  std::uint64_t ingest_cycles = 0;
  ingest_cmd->add_option("--config", ingest_config, "Ingestion config (JSON)")->required();
  ingest_cmd->add_option("--store", ingest_store, "Post store (JSONL)")->required();
  ingest_cmd->add_option("--interval", ingest_interval, "Seconds between cycles")
      ->check(CLI::NonNegativeNumber);
  ingest_cmd->add_option("--cycles", ingest_cycles, "Stop after N cycles (0 = run until signalled)");

  // replay
  auto* replay_cmd = app.add_subcommand("replay", "Replay a JSONL capture into a store");
  std::string replay_in, replay_store, replay_event = "event";
  std::vector<std::string> replay_terms;
  std::size_t replay_page = 0;
  replay_cmd->add_option("--in", replay_in, "Input JSONL")->required();
  replay_cmd->add_option("--store", replay_store, "Post store (JSONL)")->required();
  replay_cmd->add_option("--term", replay_terms,
                         "Search term (repeatable); defaults to the input's matched_terms");
  replay_cmd->add_option("--event", replay_event, "Event name");
  replay_cmd->add_option("--page-size", replay_page, "Records per cycle (0 = all)");

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "Run one analysis over a store");
  std::string analyze_store, analyze_out, analyze_session, analyze_table;
  std::vector<std::string> analyze_excl;
  std::size_t analyze_rows = 10;
  AnalysisOptions analyze_opts;
  analyze_cmd->add_option("--store", analyze_store, "Post store (JSONL)")->required();
  analyze_opts.add_to(analyze_cmd);
  analyze_cmd->add_option("--exclude", analyze_excl, "Lemma to exclude (repeatable)");
  analyze_cmd->add_option("--out", analyze_out, "Write the snapshot JSON here");
  analyze_cmd->add_option("--session", analyze_session,
                          "Record the snapshot in this session directory");
  analyze_cmd->add_option("--table", analyze_table, "Write the contingency table as CSV");
  analyze_cmd->add_option("--rows", analyze_rows, "Candidate rows printed")
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));

  // report
  auto* report_cmd = app.add_subcommand("report", "Print a snapshot's top candidates");
  std::string report_snapshot, report_svg;
  std::size_t report_top = 10;
  report_cmd->add_option("--snapshot", report_snapshot, "Snapshot JSON")->required();
  report_cmd->add_option("--top", report_top, "Rows to print")
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
  report_cmd->add_option("--svg", report_svg, "Also write the biplot SVG here");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Serve the /api/v1 HTTP API");
  ServeOptions serve_opts;
  AnalysisOptions serve_analysis;
  serve_cmd->add_option("--store", serve_opts.store, "Post store (JSONL)")->required();
  serve_cmd->add_option("--port", serve_opts.port, "TCP port (0 = any free port)")
      ->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", serve_opts.host, "Bind address");
  serve_cmd->add_option("--session", serve_opts.session_dir,
                        "Session directory (default <store>.session)");
  serve_cmd->add_option("--allow-origin", serve_opts.origin,
                        "CORS origin (default: localhost only)");
  serve_cmd->add_option("--term", serve_opts.terms, "Initial search term (repeatable)");
  serve_cmd->add_option("--event", serve_opts.event, "Event name");
  serve_cmd->add_option("--config", serve_opts.live_config, "Run live ingestion with this config");
  serve_cmd->add_option("--replay", serve_opts.replay_in, "Replay this capture while serving");
  serve_cmd->add_option("--replay-interval", serve_opts.replay_interval,
                        "Seconds between replay pages")
      ->check(CLI::NonNegativeNumber);
  serve_analysis.add_to(serve_cmd);

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic post stream");
  std::string synth_scenario, synth_out;
  synth_cmd->add_option("--scenario", synth_scenario, "Scenario spec (JSON)")->required();
  synth_cmd->add_option("--out", synth_out, "Output JSONL")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*ingest_cmd) {
      return run_ingest(ingest_config, ingest_store, ingest_interval, ingest_cycles, out);
    }
    if (*replay_cmd) {
      return run_replay(replay_in, replay_store, replay_terms, replay_event, replay_page, out);
    }
    if (*analyze_cmd) {
      return run_analyze(analyze_store, analyze_opts, analyze_excl, analyze_out, analyze_session,
                         analyze_table, analyze_rows, out);
    }
    if (*report_cmd) return run_report(report_snapshot, report_top, report_svg, out);
    if (*serve_cmd) return run_serve(serve_opts, serve_analysis, out);
    if (*synth_cmd) return run_synth(synth_scenario, synth_out, out);
  } catch (const Error& e) {
    const auto api = server::to_api_error(e);
    err << "error [" << server::to_string(api.code) << "]: " << api.message << "\n";
    return kExitPipeline;
  } catch (const std::exception& e) {
    err << "error [INTERNAL]: " << e.what() << "\n";
    return kExitPipeline;
  }
  return kExitUsage;
}

}  // namespace narrascope::cli
