import argparse
import sys

from srl_bridge.models import load_model
from srl_bridge.server import serve


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="srl-bridge",
        description="Serve an SRL tagger over newline-delimited JSON.",
    )
    parser.add_argument("--model", default="hash:0",
                        help="hash:<seed> or hf:<checkpoint name or path>")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=0,
                        help="0 binds an ephemeral port (printed on startup)")
    parser.add_argument("--device", default="cpu")
    args = parser.parse_args(argv)
    serve(load_model(args.model, args.device), args.host, args.port)
    return 0


if __name__ == "__main__":
    sys.exit(main())
