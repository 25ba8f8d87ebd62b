"""
Scripted Oracle Server
Flask Application Entry Point
"""

import os
from typing import Mapping, Optional, Union

from flask import Flask
from dotenv import load_dotenv

from models.hoare import Outcome

# Load environment variables
load_dotenv()


def create_app(script: Optional[Union[str, Mapping[str, Union[str, Outcome]]]] = None) -> Flask:
    """
    Application factory

    Args:
        script: Path of a mock script, or the script itself
            ({fingerprint: "PASS" | "FAIL" | "ERROR"}); empty when None
    """
    from services.mock_oracle import MockOracle
    from utils.logger import get_logger

    app = Flask(__name__)
    app.config['JSON_SORT_KEYS'] = False

    logger = get_logger(__name__)
    if isinstance(script, str):
        oracle = MockOracle.from_file(script)
    else:
        oracle = MockOracle(script or {})
    app.config['MOCK_ORACLE'] = oracle
    logger.info(f"Scripted oracle server with {len(oracle.script)} scripted slice(s)")

    from routes.oracle_routes import oracle_bp

    app.register_blueprint(oracle_bp)

    @app.errorhandler(404)
    def not_found(_error):
        return {'error': {'message': 'The requested resource was not found', 'type': 'not_found_error'}}, 404

    @app.errorhandler(405)
    def method_not_allowed(_error):
        return {'error': {'message': 'Method not allowed', 'type': 'invalid_request_error'}}, 405

    @app.errorhandler(500)
    def internal_error(_error):
        return {'error': {'message': 'An unexpected error occurred', 'type': 'server_error'}}, 500

    @app.route('/health', methods=['GET'])
    def health():
        return {'status': 'ok', 'scripted_slices': len(oracle.script), 'calls': len(oracle.calls)}, 200

    return app


if __name__ == '__main__':
    from config.settings import settings

    script_path = os.getenv('MOCK_SCRIPT', '')
    application = create_app(script_path or None)
    print(f"Scripted oracle running on http://{settings.MOCK_SERVER_HOST}:{settings.MOCK_SERVER_PORT}")
    application.run(host=settings.MOCK_SERVER_HOST, port=settings.MOCK_SERVER_PORT, debug=False, use_reloader=False)
