#!/usr/bin/env python3
"""Drive the tiered safety policy with a person pacing around a robot.

The walk below crosses both tier boundaries in both directions. On the
way in, tiers escalate the moment a boundary is crossed; on the way out,
the hysteresis margin keeps the stricter tier until the person is clearly
past the boundary, so the tier never chatters.

Run:  python3 demos/04_safety_tiers.py
"""

from wallsense import (
    INITIAL_STATE,
    OccupancyReport,
    Peak,
    TargetClass,
    TierConfig,
    format_log_line,
    update_door_policy,
    update_tier,
)

CONFIG = TierConfig()  # stop < 1.0 m, slow < 3.0 m, 0.2 m hysteresis


def human_at(range_m):
    return [(Peak(range_m, 0.01, 0.01, 0), TargetClass.HUMAN)]


def main():
    print(f"config: {CONFIG}")
    print()

    walk = [3.5, 3.1, 2.5, 1.4, 0.9, 0.7, 1.1, 1.4, 2.8, 3.1, 3.3, None]
    state = INITIAL_STATE
    for t, pos in enumerate(walk):
        state = update_tier(state, [] if pos is None else human_at(pos), CONFIG)
        note = "(no detection)" if pos is None else f"person at {pos} m"
        print(f"{format_log_line(t, state)}    <- {note}")

    print()
    print("note t=6: 1.1 m is outside the 1.0 m stop zone but inside its")
    print("0.2 m margin, so Stop holds; t=9 likewise holds Slow at 3.1 m")
    print()

    # the door interlock reacts to through-wall occupancy, not to tiers
    det = Peak(1.6, 0.05, 0.05, 21)
    occupied = OccupancyReport(True, (det,), 0, 0.075)
    empty = OccupancyReport(False, (), 1, 0.075)
    state = update_door_policy(state, occupied)
    print(format_log_line(12, state), "   <- zone behind the door occupied")
    state = update_door_policy(state, empty)
    print(format_log_line(13, state), "   <- zone cleared, entry restored")


if __name__ == "__main__":
    main()
