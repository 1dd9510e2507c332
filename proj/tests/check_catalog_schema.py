"""Validates `typicality-lab list --json` against docs/catalog.schema.json."""
import json
import subprocess
import sys

import jsonschema


def main() -> int:
    cli, schema_path = sys.argv[1], sys.argv[2]
    out = subprocess.run([cli, "list", "--json"], check=True, capture_output=True, text=True).stdout
    catalog = json.loads(out)
    with open(schema_path) as f:
        schema = json.load(f)
    jsonschema.validate(catalog, schema)
    names = [e["name"] for e in catalog["experiments"]]
    if len(names) != len(set(names)):
        print("duplicate experiment names:", names)
        return 1
    print(f"catalog valid: {len(names)} experiments")
    return 0


if __name__ == "__main__":
    sys.exit(main())
