#include "fjsp/instance.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace fjsp {

namespace {

struct Token {
    std::string text;
    int line;   // 1-based
    int index;  // 1-based position within the line
};

std::vector<Token> tokenize(std::istream& in) {
    std::vector<Token> tokens;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        int idx = 0;
        size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            if (pos >= line.size()) break;
            size_t end = pos;
            while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
            tokens.push_back({line.substr(pos, end - pos), line_no, ++idx});
            pos = end;
        }
    }
    return tokens;
}

class TokenCursor {
public:
    explicit TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    bool done() const { return pos_ >= tokens_.size(); }
    const Token& peek() const { return tokens_[pos_]; }
    const Token& take() { return tokens_[pos_++]; }

    long long take_int(const char* what) {
        if (done()) {
            throw ParseError(ParseError::Kind::TruncatedJobLine, last_line(), last_index() + 1,
                             std::string("unexpected end of input, expected ") + what);
        }
        const Token& t = take();
        size_t used = 0;
        long long value = 0;
        try {
            value = std::stoll(t.text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != t.text.size()) {
            throw ParseError(ParseError::Kind::BadToken, t.line, t.index,
                             "expected an integer for " + std::string(what) + ", got '" + t.text + "'");
        }
        return value;
    }

    int last_line() const { return tokens_.empty() ? 1 : tokens_.back().line; }
    int last_index() const { return tokens_.empty() ? 0 : tokens_.back().index; }

private:
    std::vector<Token> tokens_;
    size_t pos_ = 0;
};

}  // namespace

int RawInstance::total_ops() const {
    int n = 0;
    for (const auto& job : jobs) n += static_cast<int>(job.size());
    return n;
}

int RawInstance::max_ops_per_job() const {
    int n = 0;
    for (const auto& job : jobs) n = std::max(n, static_cast<int>(job.size()));
    return n;
}

TimeUnit RawInstance::total_work() const {
    TimeUnit total = 0;
    for (const auto& job : jobs)
        for (const auto& op : job)
            for (const auto& alt : op) total += alt.duration;
    return total;
}

TimeUnit RawInstance::max_op_duration() const {
    TimeUnit best = 0;
    for (const auto& job : jobs)
        for (const auto& op : job)
            for (const auto& alt : op) best = std::max(best, alt.duration);
    return best;
}

TimeUnit RawInstance::duration_on(JobId j, StageId s, int machine1) const {
    for (const auto& alt : op(j, s))
        if (alt.machine == machine1) return alt.duration;
    return -1;
}

RawInstance parse_instance(std::istream& in, const std::string& name) {
    TokenCursor cur(tokenize(in));

    RawInstance inst;
    inst.name = name;
    if (cur.done()) throw ParseError(ParseError::Kind::MalformedHeader, 1, 1, "empty input");

    const int header_line = cur.peek().line;
    const long long num_jobs = cur.take_int("job count");
    if (cur.done() || cur.peek().line != header_line) {
        throw ParseError(ParseError::Kind::MalformedHeader, header_line, 2,
                         "header needs at least two integers (jobs, machines)");
    }
    const long long num_machines = cur.take_int("machine count");
    if (num_jobs <= 0 || num_machines <= 0) {
        throw ParseError(ParseError::Kind::MalformedHeader, header_line, 1,
                         "job and machine counts must be positive");
    }
    inst.num_jobs = static_cast<int>(num_jobs);
    inst.num_machines = static_cast<int>(num_machines);

    // Optional third header value; real files carry either an integer or a
    // fractional average flexibility (e.g. "1.15"), both ignored.
    if (!cur.done() && cur.peek().line == header_line) {
        const Token& t = cur.take();
        try {
            size_t used = 0;
            const double avg = std::stod(t.text, &used);
            if (used != t.text.size()) throw std::invalid_argument(t.text);
            inst.avg_machines_per_op = avg;
        } catch (const std::exception&) {
            throw ParseError(ParseError::Kind::BadToken, t.line, t.index,
                             "header's optional third value is not numeric: '" + t.text + "'");
        }
        if (!cur.done() && cur.peek().line == header_line) {
            const Token& extra = cur.peek();
            throw ParseError(ParseError::Kind::MalformedHeader, extra.line, extra.index,
                             "unexpected extra header token '" + extra.text + "'");
        }
    }

    inst.jobs.resize(static_cast<size_t>(inst.num_jobs));
    for (int j = 0; j < inst.num_jobs; ++j) {
        const long long op_count = cur.take_int("operation count");
        if (op_count <= 0) {
            throw ParseError(ParseError::Kind::TruncatedJobLine, cur.last_line(), cur.last_index(),
                             "job " + std::to_string(j) + " declares no operations");
        }
        auto& job = inst.jobs[static_cast<size_t>(j)];
        job.resize(static_cast<size_t>(op_count));
        for (long long s = 0; s < op_count; ++s) {
            const long long alt_count = cur.take_int("alternative count");
            if (alt_count <= 0) {
                throw ParseError(ParseError::Kind::TruncatedJobLine, cur.last_line(), cur.last_index(),
                                 "operation with no machine alternatives");
            }
            auto& op = job[static_cast<size_t>(s)];
            op.reserve(static_cast<size_t>(alt_count));
            for (long long a = 0; a < alt_count; ++a) {
                const long long machine = cur.take_int("machine index");
                const long long duration = cur.take_int("processing time");
                if (machine < 1 || machine > inst.num_machines) {
                    throw ParseError(ParseError::Kind::MachineOutOfRange, cur.last_line(),
                                     cur.last_index(),
                                     "machine " + std::to_string(machine) + " outside [1, " +
                                         std::to_string(inst.num_machines) + "]");
                }
                if (duration <= 0) {
                    throw ParseError(ParseError::Kind::NonPositiveDuration, cur.last_line(),
                                     cur.last_index(),
                                     "processing time must be positive, got " +
                                         std::to_string(duration));
                }
                for (const auto& prev : op) {
                    if (prev.machine == static_cast<int>(machine)) {
                        throw ParseError(ParseError::Kind::DuplicateMachine, cur.last_line(),
                                         cur.last_index(),
                                         "machine " + std::to_string(machine) +
                                             " listed twice for one operation");
                    }
                }
                op.push_back({static_cast<int>(machine), duration});
            }
        }
    }

    if (!cur.done()) {
        const Token& t = cur.peek();
        throw ParseError(ParseError::Kind::TrailingTokens, t.line, t.index,
                         "unexpected trailing token '" + t.text + "'");
    }
    return inst;
}

RawInstance parse_instance(const std::string& text, const std::string& name) {
    std::istringstream in(text);
    return parse_instance(in, name);
}

RawInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open instance file: " + path);
    std::string name = path;
    if (const size_t slash = name.find_last_of('/'); slash != std::string::npos)
        name = name.substr(slash + 1);
    if (const size_t dot = name.find_last_of('.'); dot != std::string::npos)
        name = name.substr(0, dot);
    return parse_instance(in, name);
}

std::string serialize_instance(const RawInstance& inst) {
    std::ostringstream out;
    out << inst.num_jobs << ' ' << inst.num_machines;
    if (inst.avg_machines_per_op) out << ' ' << *inst.avg_machines_per_op;
    out << '\n';
    for (const auto& job : inst.jobs) {
        out << job.size();
        for (const auto& op : job) {
            out << ' ' << op.size();
            for (const auto& alt : op) out << ' ' << alt.machine << ' ' << alt.duration;
        }
        out << '\n';
    }
    return out.str();
}

TimeUnit OpTable::total_remaining() const {
    TimeUnit total = 0;
    for (const auto& row : cells)
        for (const auto& cell : row)
            for (TimeUnit t : cell.remaining_time_set) total += t;
    return total;
}

OpTable build_table(const RawInstance& inst) {
    OpTable table;
    table.cells.resize(static_cast<size_t>(inst.num_jobs));
    for (int j = 0; j < inst.num_jobs; ++j) {
        auto& row = table.cells[static_cast<size_t>(j)];
        row.resize(static_cast<size_t>(inst.op_count(j)));
        for (int s = 0; s < inst.op_count(j); ++s) {
            const Operation& op = inst.op(j, s);
            auto& cell = row[static_cast<size_t>(s)];
            cell.machine_set.reserve(op.size());
            cell.remaining_time_set.reserve(op.size());
            for (const auto& alt : op) {
                cell.machine_set.push_back(alt.machine);
                cell.remaining_time_set.push_back(alt.duration);
            }
        }
    }
    return table;
}

}  // namespace fjsp
