def execute_command(image):
    image_patch = ImagePatch(image)
    mop_patches = image_patch.find('mop')
    if len(mop_patches) == 0:
        return {'function': 'None', 'error': 'No mop found.'}
    mop = mop_patches[0]
    return {'function': 'navigate_to_object', 'inputs': (mop.horizontal_center, mop.vertical_center), 'box': [mop.left, mop.lower, mop.right, mop.upper]}
