#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "xit/pipeline/study_set.hpp"

namespace xit::service {

inline constexpr int kTestTrials = 102;
inline constexpr int kTotalTrials = kPracticeTrials + kTestTrials;
inline constexpr int kRestEvery = 10;
inline constexpr int kConfidenceMin = 1;
inline constexpr int kConfidenceMax = 5;
inline constexpr int kConfirmationMs = 2000;

enum class Phase { Practice, Test, Done };
std::string_view phase_name(Phase phase);

/// Error surfaced to clients. `status` is the HTTP status the API maps it to.
class ServiceError : public std::runtime_error {
public:
    ServiceError(int status, std::string code, const std::string& message)
        : std::runtime_error(message), status_(status), code_(std::move(code)) {}
    int status() const { return status_; }
    const std::string& code() const { return code_; }

private:
    int status_;
    std::string code_;
};

struct TrialRecord {
    std::string session_id;
    int trial_index = 0;
    Phase phase = Phase::Practice;
    std::string item_id;
    std::vector<std::string> class_options;
    std::string choice;
    int confidence = 0;
    bool correct = false;
    /// Client-measured; absent when the client reported no or a negative value.
    std::optional<double> rt_ms;
    /// Delivery-to-receipt time seen by the server, an upper bound on rt_ms.
    std::optional<double> server_rt_ms;
    std::string submitted_at;
};

/// Immutable session snapshot; mutations publish a new one.
struct SessionState {
    std::string session_id;
    std::string participant_id;
    std::uint64_t seed = 0;
    std::string created_at;
    std::vector<int> practice_order;  // indices into StudySet::practice
    std::vector<int> test_order;      // indices into StudySet::items
    /// Per global trial index, a permutation of the study's class options.
    std::vector<std::vector<int>> option_orders;
    std::vector<TrialRecord> records;  // records[i].trial_index == i

    int cursor() const { return static_cast<int>(records.size()); }
    Phase phase() const;
};

Phase phase_of(int trial_index);
/// True exactly for test-phase trials whose test index is a positive
/// multiple of kRestEvery.
bool show_rest(int trial_index);

struct TrialView {
    std::string session_id;
    int trial_index = 0;
    Phase phase = Phase::Practice;
    /// Index within the phase (practice 0..10, test 0..101).
    int phase_index = 0;
    std::string image_ref;
    std::vector<std::string> class_options;
    bool show_rest = false;
    std::string instructions;
};

struct Ack {
    int trial_index = 0;
    Phase phase = Phase::Practice;
    /// "correct"/"incorrect"; present only for practice trials.
    std::optional<std::string> feedback;
    Phase next_phase = Phase::Practice;
    std::optional<int> next_index;
};

struct ResponseInput {
    std::string choice;
    int confidence = 0;
    std::optional<double> rt_ms;
};

/// Session lifecycle, sequencing and persistence for one study set. All
/// public members are thread-safe. Mutations on one session are serialized;
/// reads work on atomically published snapshots.
class StudyService {
public:
    /// Replays `<data_dir>/journal.jsonl` when present. Throws InvalidArgument
    /// when the study set does not have kTestTrials test and kPracticeTrials
    /// practice items.
    StudyService(StudySet study, std::filesystem::path data_dir);

    const StudySet& study() const { return study_; }

    std::shared_ptr<const SessionState> create_session(const std::string& participant_id,
                                                       std::uint64_t seed);
    std::shared_ptr<const SessionState> session(const std::string& session_id) const;
    std::vector<std::shared_ptr<const SessionState>> sessions() const;

    TrialView get_trial(const std::string& session_id, int index);
    Ack submit_response(const std::string& session_id, int index, const ResponseInput& input);

    /// Absolute image path for a study item id (test or practice).
    std::filesystem::path image_path(const std::string& ref) const;
    const StudyItem* item(const std::string& ref) const;

    /// Fails when fewer than half of a session's answered baseline test
    /// trials are correct.
    static bool catch_failed(const SessionState& state, const StudySet& study);

    /// Trial CSV in the stats schema plus session_id, trial_index, phase and
    /// catch_failed, ordered by (session_id, trial_index). Empty filters match
    /// everything.
    std::string export_csv(const std::string& participant_filter = {},
                           const std::string& session_filter = {}) const;

private:
    struct Slot {
        std::mutex mutex;
        std::shared_ptr<const SessionState> snapshot;
        std::optional<std::chrono::steady_clock::time_point> delivered_at;
        int delivered_index = -1;
    };

    std::shared_ptr<Slot> slot(const std::string& session_id) const;
    std::shared_ptr<SessionState> build_session(const std::string& session_id,
                                                const std::string& participant_id,
                                                std::uint64_t seed,
                                                const std::string& created_at) const;
    const StudyItem& item_at(const SessionState& state, int trial_index) const;
    TrialRecord make_record(const SessionState& state, int index, const ResponseInput& input,
                            std::optional<double> server_rt, const std::string& submitted_at) const;
    void append_journal(const std::string& line);
    void replay_journal();

    StudySet study_;
    std::filesystem::path data_dir_;
    std::filesystem::path journal_path_;

    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Slot>> sessions_;
    std::map<std::string, std::string> active_by_participant_;
    int next_session_number_ = 1;

    std::mutex journal_mutex_;
    std::ofstream journal_;
};

}  // namespace xit::service
