#!/usr/bin/env python3
"""
Test runner script for all project tests.

Runs the fast suite first, then the slow timing and scaling checks, then the
self-training sanity check on the bundled corpus (or LITE_NGRAM_SANITY_CORPUS).
"""

import os
import subprocess
import sys


def run_pytest(label, marker_expr):
    """Run pytest over tests/ restricted by a marker expression."""
    print(f"Running {label}...")
    print("=" * 50)

    cmd = [
        sys.executable, "-m", "pytest",
        "tests",
        "-m", marker_expr,
        "-v",
        "--tb=short",
        "--color=yes",
    ]

    try:
        subprocess.run(cmd, check=True)
        print("\n" + "=" * 50)
        print(f"✅ {label} passed!")
        return True
    except subprocess.CalledProcessError as e:
        # exit code 5: no tests collected for this marker expression
        if e.returncode == 5:
            print(f"(no {label.lower()} selected)")
            return True
        print("\n" + "=" * 50)
        print(f"❌ {label} failed!")
        return False
    except FileNotFoundError:
        print("❌ pytest not found. Please install it with: pip install pytest")
        return False


def run_all_tests():
    """Run the complete test suite."""
    print("Running Complete Test Suite...")
    print("=" * 60)

    # Run from the project root so pytest.ini is picked up
    project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    os.chdir(project_root)

    fast_success = run_pytest("Fast Tests", "not slow and not integration")

    print("\n" + "=" * 60)

    slow_success = run_pytest("Slow Tests", "slow")

    print("\n" + "=" * 60)

    integration_success = run_pytest("Integration Tests", "integration")

    # Final summary
    print("\n" + "=" * 60)
    if fast_success and slow_success and integration_success:
        print("🎉 All tests passed!")
        return 0
    else:
        print("💥 Some tests failed!")
        return 1


if __name__ == "__main__":
    exit_code = run_all_tests()
    sys.exit(exit_code)
