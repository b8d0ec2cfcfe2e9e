"""Reference child for the abstractive exchange protocol.

Answers every request with its own input.  ``--reverse`` emits the answers
in reverse order, ``--fail N`` exits with status N after reading the input.
Run as ``python -m wikilead.echo_model``.
"""

import argparse
import json
import sys


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="wikilead.echo_model")
    ap.add_argument("--reverse", action="store_true")
    ap.add_argument("--fail", type=int, default=0)
    ap.add_argument("--prefix", type=int, default=0, help="keep only the first N words")
    args = ap.parse_args(argv)

    requests = [json.loads(line) for line in sys.stdin if line.strip()]
    if args.fail:
        print(f"echo model failing on purpose after {len(requests)} requests", file=sys.stderr)
        return args.fail
    if args.reverse:
        requests.reverse()
    for req in requests:
        text = req["input"]
        if args.prefix:
            text = " ".join(text.split()[: args.prefix])
        sys.stdout.write(json.dumps({"id": req["id"], "summary": text}, ensure_ascii=False) + "\n")
    sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
