"""Masked evaluation metrics and the clean/debris fusion rule.

Counts always exclude masked pixels.  Ratios use the defined-empty
convention (0 when the denominator is 0), matching how an all-background
predictor scores zero across the board.  Dataset-level numbers pool counts
(micro-averaging) rather than averaging per-tile ratios, so tiles without
the class stay well-defined.
"""

from dataclasses import asdict, dataclass

import numpy as np

from .errors import InvalidInputError, ShapeMismatchError
from .geodata.tiling import CLEAN, DEBRIS, MASKED, CLASS_NAMES, LabelGrid

DEFAULT_THRESHOLD = 0.5


def _ratio(num, den):
    return num / den if den > 0 else 0.0


@dataclass
class MetricsReport:
    class_name: str
    tp: int
    fp: int
    fn: int
    tn: int
    threshold: float = DEFAULT_THRESHOLD

    @property
    def precision(self):
        return _ratio(self.tp, self.tp + self.fp)

    @property
    def recall(self):
        return _ratio(self.tp, self.tp + self.fn)

    @property
    def iou(self):
        return _ratio(self.tp, self.tp + self.fp + self.fn)

    def to_json_row(self, split=None):
        row = asdict(self)
        row.update(precision=self.precision, recall=self.recall, iou=self.iou)
        if split is not None:
            row["split"] = split
        return row


def evaluate(pred, target, class_id, threshold=DEFAULT_THRESHOLD):
    """Binarize ``pred`` at ``threshold`` and count against ``target == class_id``.

    Pixels labelled masked are excluded from every count.  Predicted positive
    means probability >= threshold.
    """
    if class_id not in (CLEAN, DEBRIS):
        raise InvalidInputError(f"class_id must be 1 (clean) or 2 (debris), got {class_id}")
    if not 0.0 < threshold < 1.0:
        raise InvalidInputError(f"threshold must lie in (0,1), got {threshold}")
    pred = np.asarray(pred)
    classes = target.classes if isinstance(target, LabelGrid) else np.asarray(target)
    if pred.shape != classes.shape:
        raise ShapeMismatchError(f"pred {pred.shape} vs target {classes.shape}")
    valid = classes != MASKED
    pos_pred = (pred >= threshold) & valid
    pos_true = (classes == class_id) & valid
    tp = int(np.count_nonzero(pos_pred & pos_true))
    fp = int(np.count_nonzero(pos_pred & ~pos_true & valid))
    fn = int(np.count_nonzero(~pos_pred & pos_true & valid))
    tn = int(np.count_nonzero(~pos_pred & ~pos_true & valid))
    return MetricsReport(CLASS_NAMES[class_id], tp, fp, fn, tn, threshold)


def fuse_labels(clean_pred, debris_pred):
    """Merge binary per-class predictions into one class grid.

    Debris wins wherever both models fire, matching the labelling convention
    that partially debris-covered ice counts as debris-covered.
    """
    clean_pred = np.asarray(clean_pred)
    debris_pred = np.asarray(debris_pred)
    if clean_pred.shape != debris_pred.shape:
        raise ShapeMismatchError(f"clean {clean_pred.shape} vs debris {debris_pred.shape}")
    fused = np.zeros(clean_pred.shape, dtype=np.uint8)
    fused[clean_pred != 0] = CLEAN
    fused[debris_pred != 0] = DEBRIS
    return fused


def aggregate(reports):
    """Pool tp/fp/fn/tn over tiles and recompute the ratios (micro-average)."""
    reports = list(reports)
    if not reports:
        raise InvalidInputError("cannot aggregate zero reports")
    names = {r.class_name for r in reports}
    if len(names) > 1:
        raise InvalidInputError(f"refusing to pool across classes {sorted(names)}")
    thresholds = {r.threshold for r in reports}
    if len(thresholds) > 1:
        raise InvalidInputError(f"refusing to pool across thresholds {sorted(thresholds)}")
    return MetricsReport(
        class_name=reports[0].class_name,
        tp=sum(r.tp for r in reports),
        fp=sum(r.fp for r in reports),
        fn=sum(r.fn for r in reports),
        tn=sum(r.tn for r in reports),
        threshold=reports[0].threshold,
    )


def _pct(x):
    return f"{100.0 * x:6.2f}%"


def format_results_table(rows):
    """Fixed-width text table, one row per loss variant, 3 columns per class.

    ``rows`` holds (loss_label, weight_label, clean_report_or_None,
    debris_report_or_None) tuples.
    """
    widths = (8, 8, 9, 8, 8, 10)
    header_cols = ["Loss".ljust(14), "Weight(s)".ljust(10)]
    header_cols += [t.rjust(w) for t, w in zip(
        ("clean P", "clean R", "clean IoU", "debris P", "debris R", "debris IoU"), widths)]
    header = " ".join(header_cols)
    lines = [header, "-" * len(header)]
    for loss_label, weight_label, clean, debris in rows:
        cols = [f"{loss_label:<14}", f"{weight_label:<10}"]
        for rep, offset in ((clean, 0), (debris, 3)):
            vals = ("-", "-", "-") if rep is None else tuple(
                _pct(v) for v in (rep.precision, rep.recall, rep.iou))
            cols += [str(v).rjust(widths[offset + i]) for i, v in enumerate(vals)]
        lines.append(" ".join(cols).rstrip())
    return "\n".join(lines)
