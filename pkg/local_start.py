#!/usr/bin/env python3
"""Bootstrap a virtualenv and run the standard campaign, then print the overview grid."""
import os
import shutil
import subprocess
import sys
from pathlib import Path

SEED = 20240101

CAMPAIGN = [
    ["construct", "--family", "bell"],
    ["construct", "--family", "ghz", "--n", "3"],
    ["construct", "--family", "two-qubit-schmidt", "--seed", str(SEED)],
    ["construct", "--family", "bipartite-pow2", "--d", "4", "--seed", str(SEED)],
    ["construct", "--family", "bipartite-pow2", "--d", "8", "--seed", str(SEED)],
    ["construct", "--family", "w", "--n", "3"],
    ["construct", "--family", "two-qubit-si", "--seed", str(SEED)],
    ["construct", "--family", "three-qubit-si", "--seed", str(SEED)],
    ["scan", "--scenario", "two-qutrit", "--samples", "20", "--restarts", "10", "--seed", str(SEED)],
    ["scan", "--scenario", "three-qubit", "--samples", "20", "--restarts", "10", "--seed", str(SEED)],
    ["search", "--preset", "hard-four-qubit", "--restarts", "20", "--seed", str(SEED)],
    ["si", "enumerate", "--n", "2"],
    ["si", "enumerate", "--n", "3"],
    ["si", "enumerate", "--n", "4"],
    ["si", "certify-4"],
    ["si", "witness", "--random", "50", "--seed", str(SEED)],
    ["si", "odd-dim", "--d", "3"],
    ["report"],
]


def main():
    print("=" * 60)
    print("isobasis - local campaign")
    print("=" * 60)

    project_root = Path(__file__).parent.resolve()
    venv_dir = project_root / "venv"
    if os.name == "nt":
        venv_python = venv_dir / "Scripts" / "python.exe"
    else:
        venv_python = venv_dir / "bin" / "python"

    if not venv_python.exists():
        if venv_dir.exists():
            print("Virtual environment looks incomplete, recreating it")
            shutil.rmtree(venv_dir)
        else:
            print("Creating virtual environment")
        subprocess.run([sys.executable, "-m", "venv", str(venv_dir)], check=True)

    print("Installing dependencies from requirements.txt")
    try:
        subprocess.run([str(venv_python), "-m", "pip", "install", "-q", "-r", "requirements.txt"],
                       check=True, cwd=project_root)
    except subprocess.CalledProcessError as e:
        print(f"Error installing dependencies: {e}")
        sys.exit(1)

    env = os.environ.copy()
    env["PYTHONPATH"] = str(project_root / "src" / "main" / "python")

    failures = []
    for step in CAMPAIGN:
        print()
        print("-" * 60)
        print("isobasis " + " ".join(step))
        print("-" * 60)
        try:
            completed = subprocess.run([str(venv_python), "-m", "isobasis.app", *step], env=env, cwd=project_root)
        except KeyboardInterrupt:
            print("Campaign interrupted")
            sys.exit(130)
        if completed.returncode != 0:
            failures.append((step, completed.returncode))

    print()
    print("=" * 60)
    if failures:
        print(f"{len(failures)} step(s) exited non-zero:")
        for step, code in failures:
            print(f"  [{code}] isobasis {' '.join(step)}")
    else:
        print("All campaign steps exited 0")
    print("=" * 60)


if __name__ == "__main__":
    main()
