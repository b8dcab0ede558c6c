// Walking state machine: Idle -> Initialize -> SingleSupport <-> DoubleSupport,
// driven by a step-local timer that resets at the end of double support.
#pragma once

#include <stdexcept>

namespace dcmwalk {

enum class WalkPhase { Idle, Initialize, SingleSupport, DoubleSupport };
enum class WalkCommand { None, Start, Stop };
enum class Side { Left, Right };

inline Side other_side(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

struct PhaseClock {
    double t = 0.0;     // seconds since step start
    double t_ss = 0.8;  // single-support duration (may be mutated by the time adjuster)
    double t_ds = 0.2;  // double-support duration
};

/// Duration of the Initialize pseudo-step that shifts the COM from standing
/// onto the first support foot. Three step durations: a rest-to-gait
/// transfer much shorter than ~9/w demands ZMP excursions outside the
/// standing support polygon.
inline double initialize_duration(const PhaseClock& clock) {
    return 3.0 * (clock.t_ss + clock.t_ds);
}

struct TickResult {
    WalkPhase phase = WalkPhase::Idle;
    PhaseClock clock;
    bool step_completed = false;  // a DoubleSupport -> SingleSupport wrap happened
    bool stepping_began = false;  // Initialize -> SingleSupport happened
};

/// Advances the state machine by dt. The timer residue is carried across
/// transitions so long runs accumulate no phase drift. A Stop command is
/// honored only at a step boundary; callers must keep issuing it until then.
inline TickResult tick(WalkPhase phase, PhaseClock clock, double dt, WalkCommand command) {
    if (!(dt > 0.0)) throw std::invalid_argument("tick: dt must be positive");

    TickResult r;
    if (phase == WalkPhase::Idle) {
        if (command == WalkCommand::Start) {
            r.phase = WalkPhase::Initialize;
            clock.t = 0.0;
        } else {
            r.phase = WalkPhase::Idle;
        }
        r.clock = clock;
        return r;
    }

    clock.t += dt;
    const double step_duration = clock.t_ss + clock.t_ds;

    if (phase == WalkPhase::Initialize) {
        const double init = initialize_duration(clock);
        if (clock.t >= init) {
            clock.t -= init;
            phase = WalkPhase::SingleSupport;
            r.stepping_began = true;
        }
    }

    // With T_ds = 0 both transitions fire within one tick.
    while (phase == WalkPhase::SingleSupport || phase == WalkPhase::DoubleSupport) {
        if (phase == WalkPhase::SingleSupport) {
            if (clock.t < clock.t_ss) break;
            phase = WalkPhase::DoubleSupport;
        }
        if (phase == WalkPhase::DoubleSupport) {
            if (clock.t < step_duration) break;
            clock.t -= step_duration;
            r.step_completed = true;
            phase = command == WalkCommand::Stop ? WalkPhase::Idle : WalkPhase::SingleSupport;
        }
    }

    r.phase = phase;
    r.clock = clock;
    return r;
}

/// Support side of step `step_index`, alternating from `first_support`.
inline Side support_foot(int step_index, Side first_support) {
    if (step_index < 0) throw std::invalid_argument("support_foot: negative step index");
    return step_index % 2 == 0 ? first_support : other_side(first_support);
}

}  // namespace dcmwalk
