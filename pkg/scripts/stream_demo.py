"""Train NB on a synthetic corpus, then stream an unseen session through it.

Prints one line per decision (every 80 samples = 0.32 s of sensor time).

    python3 scripts/stream_demo.py --rate 1   # real-time replay
"""
import argparse
import io

from phonehar.features import featurize
from phonehar.ingest import Activity, SynthParams, synthesize_session, to_csv_text
from phonehar.learn import train_nb
from phonehar.stream import StreamConfig, replay, run_stream, threaded


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--weight", type=float, default=70.0)
    ap.add_argument("--rate", type=float, default=0.0, help="replay multiplier, 0 = unpaced")
    ap.add_argument("--seconds", type=float, default=3.0, help="seconds per activity in the session")
    args = ap.parse_args()

    model = train_nb(featurize(synthesize_session([(a, 30.0) for a in Activity], SynthParams(seed=0))))
    plan = [(a, args.seconds) for a in (Activity.IDLE, Activity.NORMAL_WALKING, Activity.RUNNING,
                                        Activity.JUMPING, Activity.IDLE)]
    session = synthesize_session(plan, SynthParams(seed=1))
    source = threaded(replay(io.StringIO(to_csv_text(session)), args.rate))
    cfg = StreamConfig(weight_kg=args.weight, rate_multiplier=args.rate)
    for ev in run_stream(source, model, cfg):
        t = (ev.decision_index + 1) * cfg.block_seconds
        print(f"t={t:6.2f}s  {ev.activity.label:14s} +{ev.kcal_delta:.5f} kcal  total {ev.kcal_total:.4f}")


if __name__ == "__main__":
    main()
