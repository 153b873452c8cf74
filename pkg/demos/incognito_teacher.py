"""Distillation as a threshold dodge, and two ways to close it.

A 2e26 FLOP teacher is trained but never deployed; a 5e24 student distilled
from it ships instead.  The literal EO 14110 reading sees only the student.
The reuse patch counters twice over: reuse lowers the threshold tenfold (or,
dually, inflates student compute tenfold), and coverage propagates from a
covered teacher to its students whether or not the teacher ever launches.

Run: python3 demos/incognito_teacher.py
"""
from compute_thresholds import (
    ComputeAmount,
    CoverageStatus,
    DerivationEvent,
    EventKind,
    Lineage,
    ModelNode,
    Scenario,
    SweepSpec,
    builtin_registry,
    evaluate,
    find_crossing,
)


def build(teacher_flop="2e26", student_flop="5e24") -> Lineage:
    return Lineage(
        [ModelNode(id="teacher", deployed=False), ModelNode(id="student")],
        [
            DerivationEvent(kind=EventKind.PRETRAIN, parent_ids=(), child_id="teacher",
                            compute=ComputeAmount.parse(teacher_flop)),
            DerivationEvent(kind=EventKind.DISTILL, parent_ids=("teacher",),
                            child_id="student", compute=ComputeAmount.parse(student_flop)),
        ],
    )


def main() -> None:
    registry = builtin_registry()
    lin = build()

    print("=== the dodge, as the literal text sees it ===")
    for rid in ("eo14110-literal", "us-reuse-patch"):
        v = evaluate(lin, "student", registry[rid])
        rules = ", ".join(v.triggered_rules) or "-"
        print(f"  {rid:<18} student: {v.status.value:<12} triggered: {rules}")
    v = evaluate(lin, "student", registry["us-reuse-patch"])
    for note in v.notes:
        if "incognito" in note or "teacher" in note:
            print(f"      note: {note}")

    print()
    print("=== both encodings of the reuse patch agree everywhere ===")
    # drop the teacher below coverage so only the student's own compute matters
    small_teacher = build(teacher_flop="5e25")
    for flop in ("9e24", "1e25", "2e25"):
        row = []
        for rid in ("us-reuse-patch", "us-reuse-patch-inflate"):
            lin2 = build(teacher_flop="5e25", student_flop=flop)
            v = evaluate(lin2, "student", registry[rid])
            row.append(f"{rid}: {v.status.value}")
        print(f"  student at {flop:>5} FLOP  ->  " + "   ".join(row))

    print()
    print("=== where exactly does the student flip? ===")
    scenario = Scenario(
        lineage=small_teacher,
        subject="student",
        sweep=SweepSpec(
            target="events.student.flop",
            from_value=ComputeAmount.parse("1e23"),
            to_value=ComputeAmount.parse("1e26"),
            steps=2,
        ),
    )
    for rid in ("us-reuse-patch", "us-reuse-patch-inflate"):
        crossing = find_crossing(scenario, registry[rid], tolerance_ooms=1e-4)
        print(f"  {rid:<24} crossing at {crossing.compact()} FLOP")
    print("the lowered threshold (1e26/10) and the inflated compute (x10)")
    print("meet at the same boundary, as the duality requires")


if __name__ == "__main__":
    main()
