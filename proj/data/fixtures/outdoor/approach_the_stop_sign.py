def execute_command(image):
    image_patch = ImagePatch(image)
    sign_patches = image_patch.find('stop sign')
    if len(sign_patches) == 0:
        return {'function': 'None', 'error': 'No stop sign found.'}
    sign = sign_patches[0]
    return {'function': 'navigate_to_object', 'inputs': (sign.horizontal_center, sign.vertical_center), 'box': [sign.left, sign.lower, sign.right, sign.upper]}
