"""Walk the n = 4 catalog: type, predicted growth window, compact-form verdict."""
from cartanlab import catalog as C
from cartanlab.classify import ck_verdict, classify_type
from cartanlab.errors import NoPrediction
from cartanlab.growth import predicted_window

N = 4

print(f"{'label':<14} {'dim':>3}  {'type':<10} {'window':<12} verdict")
for label in C.catalog_labels(N) + list(C.SL3_WHICH):
    h = C.build(label, N)
    kind, window = "-", "-"
    if h.in_an:
        v = classify_type(h)
        kind = v.label
        try:
            w = predicted_window(v)
            window = f"[{w.p:.3g}, {w.q:.3g}]"
        except NoPrediction:
            pass
    verdict = ck_verdict(h)
    print(f"{label:<14} {h.dim:>3}  {kind:<10} {window:<12} {verdict.verdict}"
          f"  ({', '.join(verdict.justification)})")
