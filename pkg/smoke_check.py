"""
Kernel Smoke Check
"""

import sys
import os

# Add project root to Python path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))


def check_shipped_corpus():
    """Load, check, compile and translate the shipped corpus"""
    print("🔍 Checking the shipped corpus...")

    try:
        from config.settings import settings
        from nominal.core.errors import NominalError
        from nominal.corpus import CORPUS_DIR, DERIVATIONS_FILE, THEORY_FILE
        from nominal.frontend.parser import load_source
        from nominal.kernel.proof_kernel import check
        from nominal.kernel.theory_compiler import compile_theory
        from nominal.kernel.translation import translate_derivation

        print("📋 Settings:")
        print(f"   Corpus: {CORPUS_DIR}")
        print(f"   Fresh atom prefix: {settings.FRESH_ATOM_PREFIX}")
        print(f"   Search depth: {settings.SEARCH_MAX_DEPTH}")
        print()

        theory = load_source(CORPUS_DIR / THEORY_FILE).theory("lambda_abe")
        print(f"✅ Theory {theory.name} loaded with {len(theory)} axiom(s)")

        compiled = compile_theory(theory)
        print(f"✅ Compiled to {len(compiled)} NEoL axiom(s)")

        source = load_source(CORPUS_DIR / DERIVATIONS_FILE)
        for name, decl in source.derivations.items():
            check(source.theories[decl.theory], decl.derivation)
            translate_derivation(theory, compiled, decl.derivation)
            print(f"✅ {name}: checked and translated")

        print("✅ All checks passed! The kernel is working.")
        return True

    except ImportError as e:
        print(f"❌ Import Error: {e}")
        print("💡 Make sure you have installed the required packages:")
        print("   pip install -r requirements.txt")
        return False

    except NominalError as e:
        print(f"❌ Kernel Error: {e}")
        print("💡 See which derivation fails: python main.py check corpus/lambda_abe_derivations.nel")
        return False


def main():
    """Main function"""
    print("=" * 60)
    print("🧪 Nominal Kernel Smoke Check")
    print("=" * 60)

    success = check_shipped_corpus()

    print("\n" + "=" * 60)
    if success:
        print("🎉 SUCCESS: the kernel accepts the shipped corpus")
        print("You can now run the CLI: python main.py --help")
    else:
        print("❌ FAILED: the shipped corpus does not check")
    print("=" * 60)

    return 0 if success else 1


if __name__ == "__main__":
    sys.exit(main())
