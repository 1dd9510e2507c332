"""Exit-code contract of the typicality-lab CLI: 0 pass, 1 metric failure,
2 configuration error, 3 numerical error."""
import json
import os
import subprocess
import sys
import tempfile


def run(cli, args, cwd, env=None):
    p = subprocess.run([cli, *args], cwd=cwd, capture_output=True, text=True, env=env)
    return p.returncode, p.stdout + p.stderr


def write(dir_, name, payload):
    path = os.path.join(dir_, name)
    with open(path, "w") as f:
        json.dump(payload, f)
    return path


def main() -> int:
    cli = os.path.abspath(sys.argv[1])
    failures = []

    def expect(label, code, args, cwd, env=None):
        got, text = run(cli, args, cwd, env)
        status = "ok" if got == code else "FAILED"
        print(f"{status}: {label} -> {got} (want {code})")
        if got != code:
            print(text)
            failures.append(label)
        return text

    with tempfile.TemporaryDirectory() as tmp:
        out = os.path.join(tmp, "out")
        expect("default coin run passes", 0, ["run", "coin-lln", "--out", out], tmp)
        for artifact in ("report.json", "ladder.csv"):
            if not os.path.exists(os.path.join(out, "coin-lln", artifact)):
                failures.append(f"missing {artifact}")
                print(f"FAILED: missing {artifact}")

        strict = write(tmp, "strict.json", {"experiment": "coin-lln", "params": {"frequency_tolerance": 1e-9}})
        expect("impossible tolerance fails a metric", 1, ["run", "--config", strict, "--out", out], tmp)

        expect("unknown experiment", 2, ["run", "no-such-experiment", "--out", out], tmp)
        typo = write(tmp, "typo.json", {"experiment": "coin-lln", "params": {"seedz": 3}})
        expect("unknown params key", 2, ["run", "--config", typo, "--out", out], tmp)
        expect("unknown params key on validate", 2, ["validate", "--config", typo], tmp)
        expect("missing config file", 2, ["run", "--config", os.path.join(tmp, "absent.json")], tmp)
        expect("bad worker count", 2, ["run", "coin-lln", "--workers", "0", "--out", out], tmp)
        expect("unknown flag", 2, ["run", "coin-lln", "--frobnicate"], tmp)

        coarse = write(tmp, "coarse.json", {"experiment": "equivariance", "params": {"points": 16}})
        text = expect("under-resolved grid is a numerical error", 3, ["run", "--config", coarse, "--out", out], tmp)
        if "experiment 'equivariance'" not in text:
            failures.append("numerical error lacks experiment context")
            print("FAILED: numerical error lacks experiment context")

        resolved = expect("validate echoes defaults", 0, ["validate", "--config", strict], tmp)
        if '"seeds"' not in resolved:
            failures.append("validate did not echo defaults")

        env = dict(os.environ, TYPLAB_OUTPUT_DIR=os.path.join(tmp, "env-out"))
        quick = write(tmp, "quick.json", {"experiment": "effective-detect", "params": {"points": 128}})
        expect("output directory from the environment", 0, ["run", "--config", quick], tmp, env)
        if not os.path.exists(os.path.join(tmp, "env-out", "effective-detect", "report.json")):
            failures.append("environment output directory ignored")
            print("FAILED: environment output directory ignored")

        expect("list", 0, ["list"], tmp)

    print("all CLI checks passed" if not failures else f"{len(failures)} CLI checks failed")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
