#pragma once

#include "marlo/baselines/baselines.hpp"

#include <filesystem>
#include <map>

namespace marlo::tournament {

using baselines::BaselineKind;

/// A competitor: one baseline per game it may be asked to play.
struct Entry {
  std::string id;
  std::map<GameKind, BaselineKind> controllers;

  static Entry uniform(std::string id, BaselineKind k);
  [[nodiscard]] BaselineKind controller_for(GameKind g) const;
};

struct StageConfig {
  int leagues = 1;
  int league_size = 4;
  int promote_k = 2;             // ignored in the final stage
  int episodes_per_pairing = 2;  // even, so sides swap halfway
};

struct TaskRef {
  std::string name;
  TaskSpec spec;
};

struct BracketConfig {
  std::vector<Entry> entries;
  std::vector<TaskRef> tasks;
  std::vector<StageConfig> stages;
  std::uint64_t base_seed = 0;
  int workers = 1;
};

/// Raised before any match runs when the bracket cannot be played as configured.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks the whole bracket up front; throws ConfigError listing the first problem.
void validate(const BracketConfig& config);

/// Config file form; task entries are inline objects or paths relative to `base_dir`.
BracketConfig bracket_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
BracketConfig load_bracket(const std::filesystem::path& path);

struct MatchAssignment {
  int stage = 0;
  int league = 0;
  std::string first;   // entry ids of the pair, sorted
  std::string second;
  std::size_t task = 0;
  int episode = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> slot_entry;  // entry id controlling each agent slot
  friend bool operator==(const MatchAssignment&, const MatchAssignment&) = default;
};

/// Every unordered pair x every task x E episodes. Mob Chase pairs play as teammates with
/// alternating slots; team games put `first` on team 0 for the first E/2 episodes.
std::vector<MatchAssignment> schedule_league(const std::vector<std::string>& members, const BracketConfig& config,
                                             int stage, int league);

struct LeagueTable {
  int stage = 0;
  int league = 0;
  std::vector<std::string> members;
  std::vector<std::string> task_names;
  std::map<std::string, std::vector<Centipoints>> per_task;  // entry -> per task
  std::map<std::string, Centipoints> totals;
  /// head_to_head[a][b]: a's score in matches against b.
  std::map<std::string, std::map<std::string, Centipoints>> head_to_head;
  int matches = 0;
  std::vector<std::string> ranking;
  std::vector<std::string> notes;  // tie-break decisions
};

LeagueTable empty_table(int stage, int league, const std::vector<std::string>& members, const BracketConfig& config);
/// Credits one finished match to the table.
void accumulate(LeagueTable& table, const MatchAssignment& m, const EpisodeResult& result);

/// Descending total; ties broken by head-to-head among the tied entries, then by a draw
/// seeded from `seed` and the entry ids. Fills table.ranking and table.notes.
void rank(LeagueTable& table, std::uint64_t seed);

/// Top-k of each league pooled by rank tier, shuffled within a tier, and dealt in snake order.
std::vector<std::vector<std::string>> advance(const std::vector<LeagueTable>& stage_tables, const StageConfig& stage,
                                              const StageConfig& next, std::uint64_t seed, int stage_index);

struct PlayedMatch {
  MatchAssignment assignment;
  MatchRecord record;
};

struct StageResult {
  std::vector<LeagueTable> tables;
};

struct TournamentResult {
  std::vector<StageResult> stages;
  std::string champion;
  std::vector<PlayedMatch> matches;
};

struct RunOptions {
  bool keep_records = true;
};

TournamentResult run_tournament(const BracketConfig& config, const RunOptions& options = {});

nlohmann::json to_json(const LeagueTable& t);
std::string render_table(const LeagueTable& t);
nlohmann::json bracket_report(const TournamentResult& r, const BracketConfig& config);
std::string render_bracket(const TournamentResult& r);

/// Per-league tables (.json, .txt), the bracket report, and replays/ with every match.
void write_reports(const TournamentResult& r, const BracketConfig& config, const std::filesystem::path& dir);

}  // namespace marlo::tournament
