"""Where SB 1047's definitions leak.

Sec. 22602 defines a covered model by compute AND dollar cost, and its
fine-tune limb only catches fine-tunes of models that are already covered.
Both conjunctions open gaps: a frontier-compute run trained cheaply is out,
and so is an arbitrarily large fine-tune of a non-covered base.  This script
classifies a grid of cases and prints what the bill sees.

Run: python3 demos/statutory_gap.py
"""
from compute_thresholds import (
    ComputeAmount,
    DerivationEvent,
    EventKind,
    Lineage,
    ModelNode,
    MoneyAmount,
    sb1047_classify,
)


def pretrain(child, flop, cost_usd=None):
    return DerivationEvent(
        kind=EventKind.PRETRAIN, parent_ids=(), child_id=child,
        compute=ComputeAmount.parse(flop),
        cost=MoneyAmount(cost_usd) if cost_usd is not None else None,
    )


def finetune(parent, child, flop, cost_usd=None):
    return DerivationEvent(
        kind=EventKind.FINETUNE, parent_ids=(parent,), child_id=child,
        compute=ComputeAmount.parse(flop),
        cost=MoneyAmount(cost_usd) if cost_usd is not None else None,
    )


def lineage(*events):
    ids = {e.child_id for e in events}
    return Lineage([ModelNode(id=i) for i in sorted(ids)], list(events))


def show(label, lin, subject):
    v = sb1047_classify(lin, subject)
    cls = v.classification
    kind = f" ({cls.derivative_kind.value})" if cls.derivative_kind else ""
    print(f"  {label:<46} -> {cls.category.value}{kind}")
    for note in v.notes:
        if "gap" in note or "limb" in note:
            print(f"      note: {note}")


def main() -> None:
    print("=== the pretraining limb: >1e26 FLOP and >$100M, jointly ===")
    show("1.2e26 FLOP, $150M", lineage(pretrain("X", "1.2e26", 150e6)), "X")
    show("1.2e26 FLOP, $60M (frontier scale, cheap)",
         lineage(pretrain("X", "1.2e26", 60e6)), "X")
    show("8e25 FLOP, $150M (expensive, under compute)",
         lineage(pretrain("X", "8e25", 150e6)), "X")

    print()
    print("=== the fine-tune limb: >=3e25 FLOP and >$10M, on a covered parent ===")
    covered = pretrain("P", "1.2e26", 150e6)
    show("covered parent, 3e25 + $12M fine-tune",
         lineage(covered, finetune("P", "X", "3e25", 12e6)), "X")
    show("covered parent, 3e25 fine-tune, $8M",
         lineage(covered, finetune("P", "X", "3e25", 8e6)), "X")
    show("covered parent, 2.9e25 + $12M fine-tune",
         lineage(covered, finetune("P", "X", "2.9e25", 12e6)), "X")

    print()
    print("=== the gap: huge fine-tunes of non-covered bases ===")
    big_cheap = pretrain("B", "2e26", 60e6)  # not covered: cost under $100M
    show("9e25 + $90M fine-tune of a NON-covered base",
         lineage(big_cheap, finetune("B", "X", "9e25", 90e6)), "X")
    print("  the fine-tune limb never fires because the parent is not covered,")
    print("  and fine-tunes are not pretraining runs, so neither limb applies")

    print()
    print("=== duties follow the developer, not the derivative ===")
    lin = lineage(covered, finetune("P", "X", "1e24", 1e6))
    v = sb1047_classify(lin, "X")
    print(f"  small fine-tune of a covered model -> {v.classification.category.value}")
    print(f"  status for the derivative itself: {v.status.value}")
    for note in v.notes:
        if "derivative" in note:
            print(f"      note: {note}")


if __name__ == "__main__":
    main()
