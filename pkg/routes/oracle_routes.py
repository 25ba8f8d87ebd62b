"""
Scripted Oracle Routes - chat-completions endpoint

Answers chat-completions requests from a mock script: the slice is taken
from the fenced block of the last user message and looked up by
fingerprint.
"""

import uuid

from flask import Blueprint, current_app, jsonify, request

from models.hoare import Outcome
from services.prompt_builder import FAIL_MARKER, PASS_MARKER, slice_fingerprints
from services.tokenizer import count_tokens
from utils.logger import get_logger

oracle_bp = Blueprint('oracle', __name__, url_prefix='/v1')
logger = get_logger(__name__)


def _error(message: str, status: int, kind: str = "invalid_request_error"):
    return jsonify({'error': {'message': message, 'type': kind}}), status


@oracle_bp.route('/chat/completions', methods=['POST'])
def chat_completions():
    """
    Scripted chat completion

    Request Body:
    {
        "model": "gpt-4o",
        "messages": [{"role": "user", "content": "...```mini\\n...\\n```..."}]
    }

    Response:
    {
        "object": "chat.completion",
        "choices": [{"index": 0, "message": {"role": "assistant", "content": "...\\nVERDICT: PASS"}}],
        "usage": {"prompt_tokens": 120, "completion_tokens": 4, "total_tokens": 124}
    }

    A slice scripted ERROR is answered without a verdict line; an
    unscripted slice gets a 404.
    """
    data = request.get_json(silent=True)
    if not data or not isinstance(data.get('messages'), list) or not data['messages']:
        return _error("messages are required", 400)

    prompts = [m.get('content') or '' for m in data['messages'] if isinstance(m, dict) and m.get('role') == 'user']
    if not prompts:
        return _error("no user message", 400)
    prompt = prompts[-1]

    oracle = current_app.config['MOCK_ORACLE']
    candidates = [fp for fp in slice_fingerprints(prompt) if fp in oracle.script]
    if not candidates:
        logger.warning("Request for a slice the script does not know")
        return _error("no scripted answer for this slice", 404, "not_found_error")

    outcome = oracle.answer(candidates[0])
    if outcome == Outcome.PASS:
        content = f"The post-condition holds on every execution.\n{PASS_MARKER}"
    elif outcome == Outcome.FAIL:
        content = f"The post-condition can be violated.\n{FAIL_MARKER}"
    else:
        content = "Unable to decide."
    logger.info(f"Slice {candidates[0][:12]}: scripted {outcome.value}")

    prompt_tokens = count_tokens(prompt)
    completion_tokens = count_tokens(content)
    return jsonify({
        'id': f"chatcmpl-{uuid.uuid4().hex[:12]}",
        'object': 'chat.completion',
        'model': data.get('model', 'scripted'),
        'choices': [{
            'index': 0,
            'message': {'role': 'assistant', 'content': content},
            'finish_reason': 'stop',
        }],
        'usage': {
            'prompt_tokens': prompt_tokens,
            'completion_tokens': completion_tokens,
            'total_tokens': prompt_tokens + completion_tokens,
        },
    }), 200
