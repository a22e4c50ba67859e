def execute_command(image):
    image_patch = ImagePatch(image)
    answer = image_patch.simple_query('What can hold trash?')
    bins = image_patch.find(answer)
    if len(bins) == 0:
        return {'function': 'None', 'error': 'Nowhere to throw trash.'}
    target = bins[0]
    return {'function': 'navigate_to_object', 'inputs': (target.horizontal_center, target.vertical_center), 'box': [target.left, target.lower, target.right, target.upper]}
