#pragma once
#include <stdexcept>
#include <string>

namespace fjsp {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Parse failures carry the 1-based line and the token index within that line.
class ParseError : public Error {
public:
    enum class Kind {
        MalformedHeader,
        TruncatedJobLine,
        MachineOutOfRange,
        NonPositiveDuration,
        DuplicateMachine,
        TrailingTokens,
        BadToken,
    };

    ParseError(Kind kind, int line, int token, const std::string& what)
        : Error("parse error (line " + std::to_string(line) + ", token " +
                std::to_string(token) + "): " + what),
          kind(kind), line(line), token(token) {}

    Kind kind;
    int line;
    int token;
};

class SimError : public Error {
public:
    enum class Kind {
        JobNotAssignable,
        MachineNotEligible,
        MachineBusy,
        DeadlockDetected,
        MakespanBeforeCompletion,
    };

    SimError(Kind kind, const std::string& what) : Error(what), kind(kind) {}
    Kind kind;
};

class DispatchError : public Error {
public:
    enum class Kind { ActionOutOfRange, NoAssignableJob, NoIdleCandidate, UnknownRuleName };

    DispatchError(Kind kind, const std::string& what) : Error(what), kind(kind) {}
    Kind kind;
};

class EnvError : public Error {
public:
    enum class Kind { EpisodeFinished };

    EnvError(Kind kind, const std::string& what) : Error(what), kind(kind) {}
    Kind kind;
};

class AgentError : public Error {
public:
    enum class Kind { DimensionMismatch, EmptyMemory, NonFiniteLoss };

    AgentError(Kind kind, const std::string& what) : Error(what), kind(kind) {}
    Kind kind;
};

class SnapshotError : public Error {
public:
    enum class Kind { VersionMismatch, Corrupt };

    SnapshotError(Kind kind, const std::string& what) : Error(what), kind(kind) {}
    Kind kind;
};

class FormatError : public Error {
public:
    explicit FormatError(const std::string& what) : Error(what) {}
};

}  // namespace fjsp
