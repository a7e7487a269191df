#include "xit/service/study_service.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <sstream>

#include <nlohmann/json.hpp>

#include "xit/core/csv.hpp"
#include "xit/core/error.hpp"
#include "xit/core/log.hpp"
#include "xit/core/permute.hpp"
#include "xit/core/rng.hpp"

namespace xit::service {
namespace {

constexpr const char* kJournalName = "journal.jsonl";
constexpr const char* kInstructions =
    "Select the class that best matches the image, then rate your confidence from 1 (guess) "
    "to 5 (certain).";

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_number(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::optional<double> sanitize_rt(std::optional<double> rt) {
    if (!rt || !std::isfinite(*rt) || *rt < 0.0) return std::nullopt;
    return rt;
}

}  // namespace

std::string_view phase_name(Phase phase) {
    switch (phase) {
        case Phase::Practice: return "practice";
        case Phase::Test: return "test";
        case Phase::Done: return "done";
    }
    return "unknown";
}

Phase phase_of(int trial_index) {
    if (trial_index < kPracticeTrials) return Phase::Practice;
    if (trial_index < kTotalTrials) return Phase::Test;
    return Phase::Done;
}

bool show_rest(int trial_index) {
    if (phase_of(trial_index) != Phase::Test) return false;
    const int test_index = trial_index - kPracticeTrials;
    return test_index > 0 && test_index % kRestEvery == 0;
}

Phase SessionState::phase() const { return phase_of(cursor()); }

StudyService::StudyService(StudySet study, std::filesystem::path data_dir)
    : study_(std::move(study)), data_dir_(std::move(data_dir)) {
    if (static_cast<int>(study_.items.size()) != kTestTrials) {
        throw InvalidArgument("study set has " + std::to_string(study_.items.size()) +
                              " test items, expected " + std::to_string(kTestTrials));
    }
    if (static_cast<int>(study_.practice.size()) != kPracticeTrials) {
        throw InvalidArgument("study set has " + std::to_string(study_.practice.size()) +
                              " practice items, expected " + std::to_string(kPracticeTrials));
    }
    if (static_cast<int>(study_.class_options.size()) != kClassCount) {
        throw InvalidArgument("study set must list exactly " + std::to_string(kClassCount) +
                              " class options");
    }
    std::filesystem::create_directories(data_dir_);
    journal_path_ = data_dir_ / kJournalName;
    replay_journal();
    journal_.open(journal_path_, std::ios::app);
    if (!journal_) throw IoError("cannot open journal " + journal_path_.string());
}

std::shared_ptr<SessionState> StudyService::build_session(const std::string& session_id,
                                                          const std::string& participant_id,
                                                          std::uint64_t seed,
                                                          const std::string& created_at) const {
    auto state = std::make_shared<SessionState>();
    state->session_id = session_id;
    state->participant_id = participant_id;
    state->seed = seed;
    state->created_at = created_at;

    Rng rng(seed);
    for (const std::size_t i : random_permutation(study_.practice.size(), rng)) {
        state->practice_order.push_back(static_cast<int>(i));
    }
    for (const std::size_t i : random_permutation(study_.items.size(), rng)) {
        state->test_order.push_back(static_cast<int>(i));
    }
    state->option_orders.reserve(kTotalTrials);
    for (int t = 0; t < kTotalTrials; ++t) {
        std::vector<int> order;
        for (const std::size_t i : random_permutation(study_.class_options.size(), rng)) {
            order.push_back(static_cast<int>(i));
        }
        state->option_orders.push_back(std::move(order));
    }
    return state;
}

std::shared_ptr<const SessionState> StudyService::create_session(const std::string& participant_id,
                                                                 std::uint64_t seed) {
    if (participant_id.empty()) {
        throw ServiceError(400, "validation", "participant_id must not be empty");
    }
    std::unique_lock lock(sessions_mutex_);
    if (const auto it = active_by_participant_.find(participant_id);
        it != active_by_participant_.end()) {
        throw ServiceError(409, "duplicate_session",
                           "participant '" + participant_id + "' already has active session " +
                               it->second);
    }
    char id[16];
    std::snprintf(id, sizeof id, "s%06d", next_session_number_);
    const std::string created_at = utc_now();
    auto state = build_session(id, participant_id, seed, created_at);

    append_journal(nlohmann::json{{"type", "session"},
                                  {"session_id", state->session_id},
                                  {"participant_id", participant_id},
                                  {"seed", seed},
                                  {"created_at", created_at}}
                       .dump());
    ++next_session_number_;
    auto s = std::make_shared<Slot>();
    std::shared_ptr<const SessionState> snapshot = state;
    std::atomic_store(&s->snapshot, snapshot);
    sessions_[state->session_id] = s;
    active_by_participant_[participant_id] = state->session_id;
    return snapshot;
}

std::shared_ptr<StudyService::Slot> StudyService::slot(const std::string& session_id) const {
    std::shared_lock lock(sessions_mutex_);
    const auto it = sessions_.find(session_id);
    if (it == sessions_.end()) {
        throw ServiceError(404, "not_found", "unknown session '" + session_id + "'");
    }
    return it->second;
}

std::shared_ptr<const SessionState> StudyService::session(const std::string& session_id) const {
    return std::atomic_load(&slot(session_id)->snapshot);
}

std::vector<std::shared_ptr<const SessionState>> StudyService::sessions() const {
    std::shared_lock lock(sessions_mutex_);
    std::vector<std::shared_ptr<const SessionState>> out;
    out.reserve(sessions_.size());
    for (const auto& [id, s] : sessions_) out.push_back(std::atomic_load(&s->snapshot));
    return out;
}

const StudyItem& StudyService::item_at(const SessionState& state, int trial_index) const {
    if (trial_index < kPracticeTrials) {
        return study_.practice[static_cast<std::size_t>(state.practice_order[trial_index])];
    }
    return study_.items[static_cast<std::size_t>(
        state.test_order[static_cast<std::size_t>(trial_index - kPracticeTrials)])];
}

namespace {

void require_cursor(const SessionState& state, int index) {
    if (state.phase() == Phase::Done) {
        throw ServiceError(409, "session_complete",
                           "session " + state.session_id + " has no remaining trials");
    }
    if (index != state.cursor()) {
        throw ServiceError(409, "sequential_access",
                           "sequential access only: next trial is " +
                               std::to_string(state.cursor()) + ", requested " +
                               std::to_string(index));
    }
}

}  // namespace

TrialView StudyService::get_trial(const std::string& session_id, int index) {
    const auto s = slot(session_id);
    const auto state = std::atomic_load(&s->snapshot);
    require_cursor(*state, index);

    {
        std::lock_guard lock(s->mutex);
        if (s->delivered_index != index) {
            s->delivered_index = index;
            s->delivered_at = std::chrono::steady_clock::now();
        }
    }

    TrialView view;
    view.session_id = session_id;
    view.trial_index = index;
    view.phase = phase_of(index);
    view.phase_index = index < kPracticeTrials ? index : index - kPracticeTrials;
    view.image_ref = item_at(*state, index).id;
    for (const int o : state->option_orders[static_cast<std::size_t>(index)]) {
        view.class_options.push_back(study_.class_options[static_cast<std::size_t>(o)]);
    }
    view.show_rest = show_rest(index);
    view.instructions = kInstructions;
    return view;
}

TrialRecord StudyService::make_record(const SessionState& state, int index,
                                      const ResponseInput& input, std::optional<double> server_rt,
                                      const std::string& submitted_at) const {
    if (input.confidence < kConfidenceMin || input.confidence > kConfidenceMax) {
        throw ServiceError(400, "validation",
                           "confidence must be an integer in " + std::to_string(kConfidenceMin) +
                               ".." + std::to_string(kConfidenceMax));
    }
    TrialRecord rec;
    rec.session_id = state.session_id;
    rec.trial_index = index;
    rec.phase = phase_of(index);
    const StudyItem& it = item_at(state, index);
    rec.item_id = it.id;
    for (const int o : state.option_orders[static_cast<std::size_t>(index)]) {
        rec.class_options.push_back(study_.class_options[static_cast<std::size_t>(o)]);
    }
    if (std::find(rec.class_options.begin(), rec.class_options.end(), input.choice) ==
        rec.class_options.end()) {
        throw ServiceError(400, "validation",
                           "choice '" + input.choice + "' is not among the trial's options");
    }
    rec.choice = input.choice;
    rec.confidence = input.confidence;
    rec.correct = input.choice == it.true_class;
    rec.rt_ms = sanitize_rt(input.rt_ms);
    rec.server_rt_ms = server_rt;
    rec.submitted_at = submitted_at;
    return rec;
}

Ack StudyService::submit_response(const std::string& session_id, int index,
                                  const ResponseInput& input) {
    const auto s = slot(session_id);
    std::unique_lock lock(s->mutex);
    const auto state = std::atomic_load(&s->snapshot);
    if (index < state->cursor() && index >= 0) {
        throw ServiceError(409, "conflict",
                           "trial " + std::to_string(index) + " already has a response");
    }
    require_cursor(*state, index);

    std::optional<double> server_rt;
    if (s->delivered_index == index && s->delivered_at) {
        server_rt = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              *s->delivered_at)
                        .count();
    }
    TrialRecord rec = make_record(*state, index, input, server_rt, utc_now());

    nlohmann::json j = {{"type", "response"},
                        {"session_id", session_id},
                        {"trial_index", index},
                        {"choice", rec.choice},
                        {"confidence", rec.confidence},
                        {"submitted_at", rec.submitted_at}};
    j["rt_ms"] = rec.rt_ms ? nlohmann::json(*rec.rt_ms) : nlohmann::json(nullptr);
    j["server_rt_ms"] = rec.server_rt_ms ? nlohmann::json(*rec.server_rt_ms) : nlohmann::json(nullptr);
    append_journal(j.dump());

    auto next = std::make_shared<SessionState>(*state);
    next->records.push_back(rec);
    std::shared_ptr<const SessionState> published = next;
    std::atomic_store(&s->snapshot, published);
    s->delivered_index = -1;
    s->delivered_at.reset();
    lock.unlock();

    if (next->phase() == Phase::Done) {
        std::unique_lock sl(sessions_mutex_);
        const auto it = active_by_participant_.find(next->participant_id);
        if (it != active_by_participant_.end() && it->second == session_id) {
            active_by_participant_.erase(it);
        }
    }

    Ack ack;
    ack.trial_index = index;
    ack.phase = rec.phase;
    if (rec.phase == Phase::Practice) ack.feedback = rec.correct ? "correct" : "incorrect";
    ack.next_phase = next->phase();
    if (ack.next_phase != Phase::Done) ack.next_index = next->cursor();
    return ack;
}

const StudyItem* StudyService::item(const std::string& ref) const {
    for (const auto* list : {&study_.items, &study_.practice}) {
        for (const auto& it : *list) {
            if (it.id == ref) return &it;
        }
    }
    return nullptr;
}

std::filesystem::path StudyService::image_path(const std::string& ref) const {
    const StudyItem* it = item(ref);
    if (it == nullptr) throw ServiceError(404, "not_found", "unknown image '" + ref + "'");
    return it->image_path;
}

bool StudyService::catch_failed(const SessionState& state, const StudySet& study) {
    int seen = 0;
    int correct = 0;
    for (const auto& rec : state.records) {
        if (rec.phase != Phase::Test) continue;
        const auto idx = static_cast<std::size_t>(state.test_order[static_cast<std::size_t>(
            rec.trial_index - kPracticeTrials)]);
        if (study.items[idx].spec.kind != TransformKind::Baseline) continue;
        ++seen;
        correct += rec.correct ? 1 : 0;
    }
    return seen > 0 && 2 * correct < seen;
}

std::string StudyService::export_csv(const std::string& participant_filter,
                                     const std::string& session_filter) const {
    std::ostringstream out;
    std::vector<std::string> header;
    for (const auto col : {"subject_id", "subject_kind", "spec", "image", "choice", "true_class",
                           "correct", "confidence", "rt_ms", "session_id", "trial_index", "phase",
                           "catch_failed"}) {
        header.emplace_back(col);
    }
    out << csv_join(header) << '\n';

    // sessions() is keyed by session id, so rows come out in (session, trial) order.
    for (const auto& state : sessions()) {
        if (!participant_filter.empty() && state->participant_id != participant_filter) continue;
        if (!session_filter.empty() && state->session_id != session_filter) continue;
        const bool failed = catch_failed(*state, study_);
        for (const auto& rec : state->records) {
            const StudyItem& it = item_at(*state, rec.trial_index);
            out << csv_join({state->participant_id, "human", it.spec.canonical(), it.image_path,
                             rec.choice, it.true_class, rec.correct ? "1" : "0",
                             std::to_string(rec.confidence),
                             rec.rt_ms ? format_number(*rec.rt_ms) : "", state->session_id,
                             std::to_string(rec.trial_index), std::string(phase_name(rec.phase)),
                             failed ? "1" : "0"})
                << '\n';
        }
    }
    return out.str();
}

void StudyService::append_journal(const std::string& line) {
    std::lock_guard lock(journal_mutex_);
    journal_ << line << '\n';
    journal_.flush();
    if (!journal_) throw IoError("failed to append to journal " + journal_path_.string());
}

void StudyService::replay_journal() {
    std::ifstream in(journal_path_);
    if (!in) return;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error&) {
            // A torn final write from a crash; earlier lines are intact.
            warn("journal line " + std::to_string(lineno) + " is not valid JSON; ignored");
            continue;
        }
        const std::string type = j.at("type").get<std::string>();
        if (type == "session") {
            const std::string id = j.at("session_id").get<std::string>();
            const std::string participant = j.at("participant_id").get<std::string>();
            auto state = build_session(id, participant, j.at("seed").get<std::uint64_t>(),
                                       j.at("created_at").get<std::string>());
            auto s = std::make_shared<Slot>();
            std::shared_ptr<const SessionState> snapshot = state;
            std::atomic_store(&s->snapshot, snapshot);
            sessions_[id] = s;
            active_by_participant_[participant] = id;
            int number = 0;
            std::from_chars(id.data() + 1, id.data() + id.size(), number);
            next_session_number_ = std::max(next_session_number_, number + 1);
        } else if (type == "response") {
            const std::string id = j.at("session_id").get<std::string>();
            const auto it = sessions_.find(id);
            if (it == sessions_.end()) {
                throw IoError("journal line " + std::to_string(lineno) +
                              " references unknown session " + id);
            }
            const auto state = std::atomic_load(&it->second->snapshot);
            const int index = j.at("trial_index").get<int>();
            if (index != state->cursor()) {
                throw IoError("journal line " + std::to_string(lineno) +
                              " is out of sequence for session " + id);
            }
            ResponseInput input;
            input.choice = j.at("choice").get<std::string>();
            input.confidence = j.at("confidence").get<int>();
            if (!j.at("rt_ms").is_null()) input.rt_ms = j.at("rt_ms").get<double>();
            std::optional<double> server_rt;
            if (!j.at("server_rt_ms").is_null()) server_rt = j.at("server_rt_ms").get<double>();
            auto next = std::make_shared<SessionState>(*state);
            next->records.push_back(
                make_record(*state, index, input, server_rt, j.at("submitted_at").get<std::string>()));
            std::shared_ptr<const SessionState> published = next;
            std::atomic_store(&it->second->snapshot, published);
            if (next->phase() == Phase::Done) active_by_participant_.erase(next->participant_id);
        }
    }
}

}  // namespace xit::service
